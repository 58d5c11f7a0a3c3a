#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "marswpt/errors.hpp"
#include "marswpt/propagation.hpp"
#include "oracles.hpp"

using namespace marswpt;

namespace {
const RfCarrier kCarrier(2.45e9);
}

TEST_CASE("terrain presets") {
  CHECK(TerrainProfile::area1().alpha == 2.12);
  CHECK(TerrainProfile::area1().sigma_db == 11.41);
  CHECK(TerrainProfile::area2().alpha == 2.37);
  CHECK(TerrainProfile::area2().sigma_db == 13.26);
  CHECK_THROWS_AS((TerrainProfile{"x", 0.0, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((TerrainProfile{"x", 2.0, -1.0}.validate()), ConfigError);
}

TEST_CASE("free_space_factor") {
  CHECK(free_space_factor(50.0, kCarrier) == doctest::Approx(5134.8203037816).epsilon(1e-12));
  const double unit = kCarrier.wavelength_m() / (4.0 * std::numbers::pi);
  CHECK(free_space_factor(unit, kCarrier) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(free_space_factor(100.0, kCarrier) == doctest::Approx(2.0 * free_space_factor(50.0, kCarrier)));
  CHECK_THROWS_AS(free_space_factor(0.0, kCarrier), DomainError);
  CHECK_THROWS_AS(free_space_factor(-3.0, kCarrier), DomainError);
}

TEST_CASE("median path loss") {
  CHECK(std::abs(path_loss_db(50.0, kCarrier, TerrainProfile::area1()).value - 78.66) < 0.01);
  CHECK(std::abs(path_loss_db(50.0, kCarrier, TerrainProfile::area2()).value - 87.93) < 0.01);
  const double unit = kCarrier.wavelength_m() / (4.0 * std::numbers::pi);
  CHECK(std::abs(path_loss_db(unit, kCarrier, TerrainProfile::area2()).value) < 1e-12);
  CHECK(path_loss_db(50.0, kCarrier, TerrainProfile::area1(), 3.5).value ==
        doctest::Approx(path_loss_db(50.0, kCarrier, TerrainProfile::area1()).value + 3.5));
}

TEST_CASE("path loss is increasing in distance and exponent, area2 above area1") {
  const double unit = kCarrier.wavelength_m() / (4.0 * std::numbers::pi);
  double prev = -1.0;
  for (double d = unit * 1.01; d < 1e4; d *= 1.3) {
    const double pl1 = path_loss_db(d, kCarrier, TerrainProfile::area1()).value;
    const double pl2 = path_loss_db(d, kCarrier, TerrainProfile::area2()).value;
    CHECK(pl1 > prev);
    CHECK(pl2 > pl1);
    prev = pl1;
  }
  double prev_alpha = -1.0;
  for (double alpha = 1.5; alpha < 5.0; alpha += 0.25) {
    const double pl = path_loss_db(50.0, kCarrier, {"t", alpha, 0.0}).value;
    CHECK(pl > prev_alpha);
    prev_alpha = pl;
  }
}

TEST_CASE("shadowing draws") {
  Rng rng(123);
  const TerrainProfile flat{"flat", 2.0, 0.0};
  for (int i = 0; i < 100; ++i) CHECK(sample_shadowing(flat, rng) == 0.0);

  SUBCASE("moments over 1e6 draws") {
    Rng r(2024);
    const auto area1 = TerrainProfile::area1();
    double sum = 0.0, sum_sq = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
      const double x = sample_shadowing(area1, r);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(sd - 11.41) / 11.41 < 0.01);
  }

  SUBCASE("KS against N(0, sigma^2)") {
    Rng r(99);
    const auto area2 = TerrainProfile::area2();
    std::vector<double> xs(100'000);
    for (auto& x : xs) x = sample_shadowing(area2, r);
    const double d = oracle::ks_statistic(xs, [](double x) { return oracle::normal_cdf(x, 13.26); });
    CHECK(d < oracle::ks_critical_1pct(xs.size()));
  }

  SUBCASE("fixed seed repeats") {
    Rng a(7), b(7);
    for (int i = 0; i < 50; ++i) {
      CHECK(sample_shadowing(TerrainProfile::area1(), a) == sample_shadowing(TerrainProfile::area1(), b));
    }
  }
}

TEST_CASE("dust attenuation") {
  DustStorm storm;
  CHECK(storm.eps_re == 4.56);
  CHECK(storm.eps_im == 0.251);
  storm.rho_p_m = 5e-3;
  storm.n_t_per_m3 = 0.0;
  CHECK(dust_attenuation_db(storm, 50.0, kCarrier).value == 0.0);

  // Coefficient 1.029e3*0.251/(lambda*((6.56)^2+0.251^2)) = 48.9769186929671...
  CHECK(dust_coefficient(storm, kCarrier) == doctest::Approx(48.9769186929671).epsilon(1e-12));

  storm.n_t_per_m3 = 1e5;
  CHECK(std::abs(dust_attenuation_db(storm, 50.0, kCarrier).value - 30.6105741831045) < 1e-9);
  storm.rho_p_m = 1e-4;
  CHECK(dust_attenuation_db(storm, 50.0, kCarrier).value ==
        doctest::Approx(2.44884593464836e-4).epsilon(1e-10));

  CHECK_THROWS_AS(dust_attenuation_db(storm, 0.0, kCarrier), DomainError);
}

TEST_CASE("dust attenuation is linear in n_t, rho_p^3 and d") {
  DustStorm base;
  base.n_t_per_m3 = 3e4;
  base.rho_p_m = 2e-3;
  const double ref = dust_attenuation_db(base, 40.0, kCarrier).value;

  DustStorm dense = base;
  dense.n_t_per_m3 *= 7.0;
  CHECK(dust_attenuation_db(dense, 40.0, kCarrier).value == doctest::Approx(7.0 * ref));

  DustStorm coarse = base;
  coarse.rho_p_m *= 2.0;
  CHECK(dust_attenuation_db(coarse, 40.0, kCarrier).value == doctest::Approx(8.0 * ref));

  CHECK(dust_attenuation_db(base, 120.0, kCarrier).value == doctest::Approx(3.0 * ref));
}

TEST_CASE("dust validation") {
  DustStorm s;
  s.eps_im = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = DustStorm{};
  s.n_t_per_m3 = -1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = DustStorm{};
  s.rho_p_m = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}
