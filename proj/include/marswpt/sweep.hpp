#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marswpt/harvester.hpp"
#include "marswpt/link.hpp"

namespace marswpt {

enum class SweepAxis { p_tx, distance, dust_density, jitter_sigma };
enum class SecondaryAxis { rho_p, beta };
enum class Spacing { linear, log };

std::string_view to_string(SweepAxis axis) noexcept;
std::string_view to_string(SecondaryAxis axis) noexcept;
std::optional<SweepAxis> parse_sweep_axis(std::string_view text) noexcept;
std::optional<SecondaryAxis> parse_secondary_axis(std::string_view text) noexcept;

/// `count` points from min to max inclusive. Log spacing requires min > 0.
std::vector<double> make_grid(double min, double max, std::size_t count, Spacing spacing);

struct SecondarySpec {
  SecondaryAxis axis = SecondaryAxis::rho_p;
  std::vector<double> values;
};

struct SweepSpec {
  std::string name;
  LinkScenario base;
  std::vector<HarvesterModel> harvesters;
  SweepAxis axis = SweepAxis::p_tx;
  std::vector<double> points;
  std::optional<SecondarySpec> secondary;
  MonteCarloSettings mc;

  /// Every violated constraint, one message each. Empty when valid.
  std::vector<std::string> violations() const;
  /// Throws ConfigError joining all violations.
  void validate() const;

  std::size_t row_count() const noexcept;
};

struct SweepRow {
  SweepAxis axis = SweepAxis::p_tx;
  double axis_value = 0.0;
  std::optional<SecondaryAxis> secondary;
  double secondary_value = 0.0;
  std::string area;
  std::string harvester;
  double p_tx_w = 0.0;
  double distance_m = 0.0;
  double p_rx_median_dbm = 0.0;
  HarvestStats stats;
};

/// Scenario of a single grid cell: base with the axis (and secondary) applied.
LinkScenario scenario_at(const SweepSpec& spec, double axis_value,
                         std::optional<double> secondary_value);

/// Rows ordered axis point, then secondary value, then harvester. All rows
/// share the sweep seed, so every cell sees the same per-sample random
/// streams (paired comparison across the table).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct Preset {
  std::string name;
  std::string description;
  SweepSpec spec;
};

/// fig3a/b (transmit power), fig5a/b (dust density), fig6a/b (distance),
/// fig7a/b (pointing jitter). Suffix a is area 1, b is area 2.
const std::vector<Preset>& builtin_presets();
const Preset* find_preset(std::string_view name) noexcept;
std::string preset_names_joined();

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kSweepCsvHeader =
    "axis,axis_value,secondary,secondary_value,area,harvester,p_tx_w,distance_m,n_samples,seed,"
    "p_rx_median_dbm,p_h_mean_uw,p_h_median_uw,p_h_p05_uw,p_h_p95_uw,clamp_count,"
    "extrapolated_count";

/// Stats must carry the 0.05 and 0.95 quantiles. Numbers use 17 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_csv_row(std::ostream& out, const SweepRow& row);

/// Inverse of write_sweep_csv for the columns the file carries.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

}  // namespace marswpt
