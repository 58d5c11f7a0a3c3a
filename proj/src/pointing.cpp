#include "marswpt/pointing.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "marswpt/errors.hpp"

namespace marswpt {

void PointingGeometry::validate() const {
  std::string problems;
  if (!(beta_m > 0.0)) problems += "beta_m must be > 0; ";
  if (!(r_d_m > 0.0)) problems += "r_d_m must be > 0; ";
  if (!(sigma_s_m >= 0.0)) problems += "sigma_s_m must be >= 0; ";
  if (!problems.empty()) {
    problems.resize(problems.size() - 2);
    throw ConfigError("pointing: " + problems);
  }
}

double default_beam_waist(double wavelength_m) noexcept { return 7.0 * wavelength_m; }

bool MisalignmentModel::deterministic() const noexcept { return std::isinf(xi); }

MisalignmentModel derive_model(const PointingGeometry& geom) {
  geom.validate();
  const double v = std::sqrt(std::numbers::pi) * geom.beta_m / (std::sqrt(2.0) * geom.r_d_m);
  const double erf_v = std::erf(v);

  MisalignmentModel model;
  model.a0 = erf_v * erf_v;
  // Equivalent beamwidth: matches the curvature of the collected fraction at
  // zero offset for the equal-area square aperture behind a0.
  const double w_eq_sq = geom.r_d_m * geom.r_d_m * std::sqrt(std::numbers::pi) * erf_v /
                         (2.0 * v * std::exp(-v * v));
  model.w_eq_m = std::sqrt(w_eq_sq);
  model.xi = geom.sigma_s_m > 0.0 ? w_eq_sq / (4.0 * geom.sigma_s_m * geom.sigma_s_m)
                                  : std::numeric_limits<double>::infinity();
  return model;
}

double fraction_at_offset(const MisalignmentModel& model, double r_m) {
  if (!(r_m >= 0.0)) {
    throw DomainError("radial offset must be >= 0 (got " + std::to_string(r_m) + ")");
  }
  return model.a0 * std::exp(-2.0 * r_m * r_m / (model.w_eq_m * model.w_eq_m));
}

double sample_offset(double sigma_s_m, Rng& rng) {
  if (sigma_s_m == 0.0) return 0.0;
  // Inverse CDF of Rayleigh; 1 - u lies in (0, 1].
  const double u = rng.uniform();
  return sigma_s_m * std::sqrt(-2.0 * std::log1p(-u));
}

double fade_pdf(const MisalignmentModel& model, double zeta) {
  if (model.deterministic()) {
    throw DomainError("fade_pdf: no jitter, the fade is the point mass at a0");
  }
  if (!(zeta > 0.0 && zeta <= model.a0)) {
    throw DomainError("fade_pdf: zeta must lie in (0, a0] (got " + std::to_string(zeta) + ")");
  }
  return model.xi / std::pow(model.a0, model.xi) * std::pow(zeta, model.xi - 1.0);
}

double fade_cdf(const MisalignmentModel& model, double zeta) {
  if (zeta <= 0.0) return 0.0;
  if (zeta >= model.a0) return 1.0;
  if (model.deterministic()) return 0.0;
  return std::pow(zeta / model.a0, model.xi);
}

double mean_fraction(const MisalignmentModel& model) noexcept {
  if (model.deterministic()) return model.a0;
  return model.a0 * model.xi / (model.xi + 1.0);
}

}  // namespace marswpt
