#include "marswpt/quantities.hpp"

#include <cmath>
#include <string>

#include "marswpt/errors.hpp"

namespace marswpt {

PowerMw dbm_to_mw(PowerDbm p) noexcept { return {std::pow(10.0, p.value / 10.0)}; }

PowerDbm mw_to_dbm(PowerMw p) {
  if (!(p.value > 0.0)) {
    throw DomainError("mw_to_dbm: power must be > 0 mW (got " + std::to_string(p.value) + ")");
  }
  return {10.0 * std::log10(p.value)};
}

PowerDbm watts_to_dbm(double watts) { return mw_to_dbm({watts * 1e3}); }

double wavelength_of(double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw DomainError("frequency must be > 0 Hz (got " + std::to_string(frequency_hz) + ")");
  }
  return kSpeedOfLight / frequency_hz;
}

RfCarrier::RfCarrier(double frequency_hz)
    : frequency_hz_(frequency_hz), wavelength_m_(wavelength_of(frequency_hz)) {}

}  // namespace marswpt
