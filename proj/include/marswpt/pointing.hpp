#pragma once

#include "marswpt/random.hpp"

namespace marswpt {

/// Receiver aperture, transmit beam waist and per-axis pointing jitter (metres).
struct PointingGeometry {
  double beta_m = 0.5;
  double r_d_m = 0.0;
  double sigma_s_m = 0.0;

  void validate() const;
};

/// Default beam waist: seven wavelengths.
double default_beam_waist(double wavelength_m) noexcept;

/// Parameters of the misalignment fade m(r) = a0 * exp(-2 r^2 / w_eq^2).
struct MisalignmentModel {
  double a0 = 1.0;
  double w_eq_m = 0.0;
  /// Exponent of the fade CDF (zeta/a0)^xi; infinite when there is no jitter.
  double xi = 0.0;

  bool deterministic() const noexcept;
};

MisalignmentModel derive_model(const PointingGeometry& geom);

/// Collected power fraction at radial offset r (r >= 0).
double fraction_at_offset(const MisalignmentModel& model, double r_m);

/// Rayleigh(sigma_s) radial offset.
double sample_offset(double sigma_s_m, Rng& rng);

/// Density of m on (0, a0]. Requires finite xi.
double fade_pdf(const MisalignmentModel& model, double zeta);

/// P(m <= zeta) = (zeta / a0)^xi, saturating at 1 above a0.
double fade_cdf(const MisalignmentModel& model, double zeta);

/// E[m] = a0 * xi / (xi + 1); a0 when deterministic.
double mean_fraction(const MisalignmentModel& model) noexcept;

}  // namespace marswpt
