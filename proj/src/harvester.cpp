#include "marswpt/harvester.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "marswpt/errors.hpp"
#include "text.hpp"

namespace marswpt {

namespace {

constexpr int kDenominatorCheckPoints = 4096;

void check_denominator(const std::string& name, const RationalCoefficients& c,
                       const PowerRange& range) {
  if (!(range.min_mw > 0.0) || !(range.max_mw >= range.min_mw) || !std::isfinite(range.max_mw)) {
    throw ConfigError("harvester '" + name + "': valid range must satisfy 0 < min <= max");
  }
  const double log_min = std::log(range.min_mw);
  const double log_span = std::log(range.max_mw) - log_min;
  for (int i = 0; i <= kDenominatorCheckPoints; ++i) {
    const double p = i == kDenominatorCheckPoints
                         ? range.max_mw
                         : std::exp(log_min + log_span * i / kDenominatorCheckPoints);
    if (!(c.denominator(p) > 0.0)) {
      throw ConfigError("harvester '" + name + "': denominator is not positive at " +
                        text::format_double(p) + " mW inside the valid range");
    }
  }
}

}  // namespace

HarvesterModel::HarvesterModel(std::string name, const RationalCoefficients& coefficients,
                               PowerRange valid_range)
    : name_(std::move(name)), coefficients_(coefficients), valid_range_(valid_range) {
  check_denominator(name_, coefficients_, valid_range_);
}

HarvesterModel HarvesterModel::constant_efficiency(std::string name, double percent,
                                                   PowerRange valid_range) {
  if (!(percent >= 0.0 && percent <= 100.0)) {
    throw ConfigError("constant efficiency must lie in [0, 100] percent");
  }
  // Denominator 1 stands in for the check; only constant_percent_ is used.
  HarvesterModel model(std::move(name), RationalCoefficients{0, 0, percent, 0, 0, 1},
                       PowerRange{1.0, 1.0});
  model.valid_range_ = valid_range;
  model.constant_percent_ = percent;
  return model;
}

double HarvesterModel::raw_efficiency_percent(double p_mw) const {
  if (!(p_mw >= 0.0)) {
    throw DomainError("input power must be >= 0 mW (got " + text::format_double(p_mw) + ")");
  }
  if (constant_percent_) return *constant_percent_;
  const double den = coefficients_.denominator(p_mw);
  if (!(den > 0.0)) {
    throw EvaluationError("harvester '" + name_ + "': denominator is not positive at " +
                          text::format_double(p_mw) + " mW");
  }
  return coefficients_.numerator(p_mw) / den;
}

EfficiencyEvaluation HarvesterModel::evaluate(double p_mw) const {
  EfficiencyEvaluation e;
  e.raw_percent = raw_efficiency_percent(p_mw);
  e.efficiency_percent = e.raw_percent;
  if (e.raw_percent < 0.0) {
    e.efficiency_percent = 0.0;
    e.clamped = true;
  } else if (e.raw_percent > 100.0) {
    e.efficiency_percent = 100.0;
    e.clamped = true;
  }
  e.extrapolated = !valid_range_.contains(p_mw);
  return e;
}

const HarvesterModel& harvester_a() {
  static const HarvesterModel model("A", {100.1, 181.2, -4.43e-2, -6.74e-2, 3.185, 10.1e-2},
                                    {0.03, 10.0});
  return model;
}

const HarvesterModel& harvester_b() {
  static const HarvesterModel model("B", {-5.28e3, 9.46e5, -2.04e4, -150.6, 1.292e4, 9874},
                                    {1.0, 300.0});
  return model;
}

const HarvesterModel& harvester_c() {
  static const HarvesterModel model("C", {114.6, -1.613, 7.66e-3, 1.133, 9.84e-3, 4.5e-3},
                                    {1e-4, 3.0});
  return model;
}

std::optional<HarvesterModel> builtin_harvester(std::string_view name) {
  const std::string key = text::lower(text::trim(name));
  if (key == "a") return harvester_a();
  if (key == "b") return harvester_b();
  if (key == "c") return harvester_c();
  return std::nullopt;
}

std::vector<std::string> builtin_harvester_names() { return {"A", "B", "C"}; }

double efficiency_percent(const HarvesterModel& model, double p_rx_mw) {
  return model.evaluate(p_rx_mw).efficiency_percent;
}

double harvested_mw(const HarvesterModel& model, double p_rx_mw) {
  return p_rx_mw * efficiency_percent(model, p_rx_mw) / 100.0;
}

// ---------------------------------------------------------------------------
// Model files

void write_model_file(std::ostream& out, const HarvesterModel& model) {
  const auto& c = model.coefficients();
  const auto& r = model.valid_range();
  out << "# eta(P) = (a2 P^2 + a1 P + a0) / (P^3 + b2 P^2 + b1 P + b0), P in mW, eta in %\n";
  out << "name = " << model.name() << '\n';
  if (model.is_constant()) {
    out << "constant_percent = " << text::format_double(c.a0) << '\n';
  } else {
    out << "a2 = " << text::format_double(c.a2) << '\n'
        << "a1 = " << text::format_double(c.a1) << '\n'
        << "a0 = " << text::format_double(c.a0) << '\n'
        << "b2 = " << text::format_double(c.b2) << '\n'
        << "b1 = " << text::format_double(c.b1) << '\n'
        << "b0 = " << text::format_double(c.b0) << '\n';
  }
  out << "valid_min_mw = " << text::format_double(r.min_mw) << '\n'
      << "valid_max_mw = " << text::format_double(r.max_mw) << '\n';
}

HarvesterModel read_model_file(std::istream& in) {
  constexpr std::array<std::string_view, 9> kKeys = {
      "a2", "a1", "a0", "b2", "b1", "b0", "valid_min_mw", "valid_max_mw", "constant_percent"};
  std::array<std::optional<double>, kKeys.size()> values;
  std::string name = "model";

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view content = line;
    if (const auto hash = content.find('#'); hash != std::string_view::npos) {
      content = content.substr(0, hash);
    }
    content = text::trim(content);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) throw InputError("expected 'key = value'", line_no);
    const auto key = text::trim(content.substr(0, eq));
    const auto value = text::trim(content.substr(eq + 1));
    if (key == "name") {
      name = std::string(value);
      continue;
    }
    std::size_t idx = 0;
    while (idx < kKeys.size() && kKeys[idx] != key) ++idx;
    if (idx == kKeys.size()) throw InputError("unknown key '" + std::string(key) + "'", line_no);
    const auto parsed = text::parse_double(value);
    if (!parsed) throw InputError("'" + std::string(key) + "' is not a number", line_no);
    values[idx] = *parsed;
  }

  if (!values[6] || !values[7]) throw InputError("model file lacks valid_min_mw/valid_max_mw");
  const PowerRange range{*values[6], *values[7]};
  if (values[8]) return HarvesterModel::constant_efficiency(name, *values[8], range);
  for (std::size_t i = 0; i < 6; ++i) {
    if (!values[i]) throw InputError("model file lacks coefficient " + std::string(kKeys[i]));
  }
  return HarvesterModel(name,
                        {*values[0], *values[1], *values[2], *values[3], *values[4], *values[5]},
                        range);
}

}  // namespace marswpt
