#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace marswpt {

/// Coefficients of the rational efficiency model
///
///   eta(P) = (a2 P^2 + a1 P + a0) / (P^3 + b2 P^2 + b1 P + b0)
///
/// with P the input power in mW and eta in percent.
struct RationalCoefficients {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double b2 = 0.0;
  double b1 = 0.0;
  double b0 = 0.0;

  double numerator(double p_mw) const noexcept { return (a2 * p_mw + a1) * p_mw + a0; }
  double denominator(double p_mw) const noexcept {
    return ((p_mw + b2) * p_mw + b1) * p_mw + b0;
  }
};

struct PowerRange {
  double min_mw = 0.0;
  double max_mw = 0.0;

  bool contains(double p_mw) const noexcept { return p_mw >= min_mw && p_mw <= max_mw; }
};

struct EfficiencyEvaluation {
  double efficiency_percent = 0.0;  // clamped to [0, 100]
  double raw_percent = 0.0;
  bool clamped = false;
  bool extrapolated = false;  // input outside the certified range
};

/// RF-to-DC conversion efficiency model of one harvester. Immutable.
class HarvesterModel {
 public:
  /// Throws ConfigError if the denominator is not positive across `valid_range`
  /// (checked on a dense log grid) or if the range is empty.
  HarvesterModel(std::string name, const RationalCoefficients& coefficients, PowerRange valid_range);

  /// Input-independent efficiency, the classic linear-harvester assumption.
  static HarvesterModel constant_efficiency(std::string name, double percent,
                                            PowerRange valid_range = {0.0, 1e300});

  const std::string& name() const noexcept { return name_; }
  const RationalCoefficients& coefficients() const noexcept { return coefficients_; }
  const PowerRange& valid_range() const noexcept { return valid_range_; }
  bool is_constant() const noexcept { return constant_percent_.has_value(); }

  /// Unclamped model output in percent. Throws EvaluationError if the
  /// denominator is not positive at p_mw, DomainError if p_mw < 0.
  double raw_efficiency_percent(double p_mw) const;

  EfficiencyEvaluation evaluate(double p_mw) const;

 private:
  std::string name_;
  RationalCoefficients coefficients_;
  PowerRange valid_range_;
  std::optional<double> constant_percent_;
};

/// Built-in fits: "A" (discrete Schottky), "B" (discrete, high power), "C" (CMOS).
const HarvesterModel& harvester_a();
const HarvesterModel& harvester_b();
const HarvesterModel& harvester_c();

/// Looks up a built-in by name (case-insensitive "A", "B", "C").
std::optional<HarvesterModel> builtin_harvester(std::string_view name);

std::vector<std::string> builtin_harvester_names();

/// Efficiency in percent, clamped to [0, 100].
double efficiency_percent(const HarvesterModel& model, double p_rx_mw);

/// p_rx * eta / 100, in mW.
double harvested_mw(const HarvesterModel& model, double p_rx_mw);

// ---------------------------------------------------------------------------
// Fitting

struct EfficiencySample {
  double input_power_mw = 0.0;
  double efficiency_percent = 0.0;
};

struct FitOptions {
  bool refine = true;
  int max_iterations = 200;
  double tolerance = 1e-9;  // relative change of the residual sum of squares
  std::string name = "fitted";
};

struct FitResult {
  HarvesterModel model;
  double rms_residual_percent = 0.0;
  int iterations = 0;  // nonlinear refinement iterations (0 without refine)
};

/// Least-squares fit of the rational model. A linearised solve provides the
/// starting point; with `refine` the true residual is then minimised by
/// Levenberg-Marquardt. Throws FitError on fewer than 6 distinct input powers,
/// rank deficiency or a non-positive denominator inside the sample range.
FitResult fit_model(std::span<const EfficiencySample> samples, const FitOptions& options = {});

/// Two-column CSV (input_power_mw, efficiency_percent) with a header line.
/// Throws InputError carrying the offending line number.
std::vector<EfficiencySample> read_efficiency_csv(std::istream& in);

/// Flat `key = value` model file; round-trips coefficients exactly.
void write_model_file(std::ostream& out, const HarvesterModel& model);
HarvesterModel read_model_file(std::istream& in);

}  // namespace marswpt
