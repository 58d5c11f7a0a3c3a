#pragma once

// Scalar unit types and RF constants used by the link budget.
//
// The budget itself is carried in dB/dBm. Linear milliwatts only appear at
// the harvester boundary, where the efficiency model is defined.

namespace marswpt {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact

struct PowerDbm {
  double value = 0.0;
};

struct PowerMw {
  double value = 0.0;
};

struct GainDb {
  double value = 0.0;
};

struct LossDb {
  double value = 0.0;
};

PowerMw dbm_to_mw(PowerDbm p) noexcept;

/// Throws DomainError for p <= 0.
PowerDbm mw_to_dbm(PowerMw p);

/// Watts to dBm (p > 0).
PowerDbm watts_to_dbm(double watts);

/// c / f. Throws DomainError for f <= 0.
double wavelength_of(double frequency_hz);

class RfCarrier {
 public:
  explicit RfCarrier(double frequency_hz);

  double frequency_hz() const noexcept { return frequency_hz_; }
  double wavelength_m() const noexcept { return wavelength_m_; }

 private:
  double frequency_hz_;
  double wavelength_m_;
};

inline constexpr double kDefaultFrequencyHz = 2.45e9;

}  // namespace marswpt
