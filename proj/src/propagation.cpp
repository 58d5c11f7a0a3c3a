#include "marswpt/propagation.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "marswpt/errors.hpp"

namespace marswpt {

namespace {

void require_positive_distance(double distance_m) {
  if (!(distance_m > 0.0)) {
    throw DomainError("distance_m must be > 0 (got " + std::to_string(distance_m) + ")");
  }
}

}  // namespace

void TerrainProfile::validate() const {
  std::string problems;
  if (!(alpha > 0.0)) problems += "alpha must be > 0; ";
  if (!(sigma_db >= 0.0)) problems += "sigma_db must be >= 0; ";
  if (!problems.empty()) {
    problems.resize(problems.size() - 2);
    throw ConfigError("terrain '" + name + "': " + problems);
  }
}

void DustStorm::validate() const {
  std::string problems;
  if (!(eps_im > 0.0)) problems += "eps_im must be > 0; ";
  if (!(n_t_per_m3 >= 0.0)) problems += "n_t_per_m3 must be >= 0; ";
  if (!(rho_p_m > 0.0)) problems += "rho_p_m must be > 0; ";
  if (!std::isfinite(eps_re)) problems += "eps_re must be finite; ";
  if (!problems.empty()) {
    problems.resize(problems.size() - 2);
    throw ConfigError("dust: " + problems);
  }
}

double free_space_factor(double distance_m, const RfCarrier& carrier) {
  require_positive_distance(distance_m);
  return 4.0 * std::numbers::pi * distance_m / carrier.wavelength_m();
}

LossDb path_loss_db(double distance_m, const RfCarrier& carrier, const TerrainProfile& terrain,
                    double shadow_db) {
  const double k = free_space_factor(distance_m, carrier);
  return {10.0 * terrain.alpha * std::log10(k) + shadow_db};
}

double sample_shadowing(const TerrainProfile& terrain, Rng& rng) {
  if (terrain.sigma_db == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, terrain.sigma_db);
  return normal(rng);
}

double dust_coefficient(const DustStorm& storm, const RfCarrier& carrier) {
  const double re = storm.eps_re + 2.0;
  return 1.029e3 * storm.eps_im / (carrier.wavelength_m() * (re * re + storm.eps_im * storm.eps_im));
}

LossDb dust_attenuation_db(const DustStorm& storm, double distance_m, const RfCarrier& carrier) {
  require_positive_distance(distance_m);
  const double volume = storm.rho_p_m * storm.rho_p_m * storm.rho_p_m;
  return {dust_coefficient(storm, carrier) * storm.n_t_per_m3 * volume * distance_m};
}

}  // namespace marswpt
