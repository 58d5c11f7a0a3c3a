#pragma once

#include <string>

#include "marswpt/quantities.hpp"
#include "marswpt/random.hpp"

namespace marswpt {

/// Log-distance path-loss exponent and log-normal shadowing deviation of an area.
struct TerrainProfile {
  std::string name;
  double alpha = 2.0;
  double sigma_db = 0.0;

  /// Throws ConfigError unless alpha > 0 and sigma_db >= 0.
  void validate() const;

  /// Flat terrain, Gale Crater area 1.
  static TerrainProfile area1() { return {"area1", 2.12, 11.41}; }
  /// Rocky terrain, Gale Crater area 2.
  static TerrainProfile area2() { return {"area2", 2.37, 13.26}; }
};

/// Suspended dust. Permittivity defaults to the 2.45 GHz value.
struct DustStorm {
  double eps_re = 4.56;
  double eps_im = 0.251;
  double n_t_per_m3 = 0.0;  // particles per cubic metre
  double rho_p_m = 1e-4;    // mean particle radius

  void validate() const;
};

/// K = 4*pi*d / lambda. Throws DomainError for d <= 0.
double free_space_factor(double distance_m, const RfCarrier& carrier);

/// 10*alpha*log10(K) + shadow_db. shadow_db = 0 gives the median loss.
LossDb path_loss_db(double distance_m, const RfCarrier& carrier, const TerrainProfile& terrain,
                    double shadow_db = 0.0);

/// One zero-mean normal draw with standard deviation terrain.sigma_db.
double sample_shadowing(const TerrainProfile& terrain, Rng& rng);

/// Specific attenuation in dB per (particle/m^3 * m^3 * m), i.e. the factor
/// multiplying n_t * rho_p^3 * d.
double dust_coefficient(const DustStorm& storm, const RfCarrier& carrier);

/// Dust-storm attenuation in dB over a path of length d.
///
/// Attenuation scales with particle volume (rho_p cubed); see README for the
/// exponent convention.
LossDb dust_attenuation_db(const DustStorm& storm, double distance_m, const RfCarrier& carrier);

}  // namespace marswpt
