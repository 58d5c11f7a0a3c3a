#include "marswpt/sweep.hpp"

#include <cmath>

#include "marswpt/errors.hpp"
#include "text.hpp"

namespace marswpt {

namespace {

constexpr std::size_t kPresetPoints = 25;

DustStorm& ensure_dust(LinkScenario& s) {
  if (!s.dust) s.dust = DustStorm{};
  return *s.dust;
}

PointingGeometry& ensure_pointing(LinkScenario& s) {
  if (!s.pointing) {
    s.pointing = PointingGeometry{};
    s.pointing->r_d_m = default_beam_waist(s.carrier.wavelength_m());
  }
  return *s.pointing;
}

std::string axis_violation(SweepAxis axis, double v) {
  switch (axis) {
    case SweepAxis::p_tx:
      if (!(v > 0.0)) return "p_tx axis values must be > 0 W";
      break;
    case SweepAxis::distance:
      if (!(v > 0.0)) return "distance axis values must be > 0 m";
      break;
    case SweepAxis::dust_density:
      if (!(v >= 0.0)) return "dust_density axis values must be >= 0 per m^3";
      break;
    case SweepAxis::jitter_sigma:
      if (!(v >= 0.0)) return "jitter_sigma axis values must be >= 0 m";
      break;
  }
  return {};
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::p_tx:
      return "p_tx";
    case SweepAxis::distance:
      return "distance";
    case SweepAxis::dust_density:
      return "dust_density";
    case SweepAxis::jitter_sigma:
      return "jitter_sigma";
  }
  return "";
}

std::string_view to_string(SecondaryAxis axis) noexcept {
  return axis == SecondaryAxis::rho_p ? "rho_p" : "beta";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view text) noexcept {
  for (auto a : {SweepAxis::p_tx, SweepAxis::distance, SweepAxis::dust_density,
                 SweepAxis::jitter_sigma}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::optional<SecondaryAxis> parse_secondary_axis(std::string_view text) noexcept {
  if (text == "rho_p") return SecondaryAxis::rho_p;
  if (text == "beta") return SecondaryAxis::beta;
  return std::nullopt;
}

std::vector<double> make_grid(double min, double max, std::size_t count, Spacing spacing) {
  if (count == 0) throw ConfigError("grid needs at least one point");
  if (!(max >= min)) throw ConfigError("grid needs max >= min");
  if (spacing == Spacing::log && !(min > 0.0)) throw ConfigError("log grid needs min > 0");
  if (count == 1) return {min};
  std::vector<double> points(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    points[i] = spacing == Spacing::linear ? min + (max - min) * t
                                           : min * std::pow(max / min, t);
  }
  points.front() = min;
  points.back() = max;
  return points;
}

std::vector<std::string> SweepSpec::violations() const {
  std::vector<std::string> out;
  try {
    base.validate();
  } catch (const ConfigError& e) {
    out.emplace_back(e.what());
  }
  try {
    mc.validate();
  } catch (const ConfigError& e) {
    out.emplace_back(e.what());
  }
  if (harvesters.empty()) out.emplace_back("harvester list is empty");
  if (points.empty()) out.emplace_back("axis has no points");
  if (!strictly_increasing(points)) out.emplace_back("axis points must be strictly increasing");
  for (double v : points) {
    if (auto msg = axis_violation(axis, v); !msg.empty()) {
      out.push_back(msg + " (got " + text::format_double(v) + ")");
      break;
    }
  }
  if (secondary) {
    const auto name = std::string(to_string(secondary->axis));
    if (secondary->values.empty()) out.push_back("secondary axis " + name + " has no values");
    if (!strictly_increasing(secondary->values)) {
      out.push_back("secondary " + name + " values must be strictly increasing");
    }
    for (double v : secondary->values) {
      if (!(v > 0.0)) {
        out.push_back("secondary " + name + " values must be > 0 m (got " +
                      text::format_double(v) + ")");
        break;
      }
    }
  }
  return out;
}

void SweepSpec::validate() const {
  const auto problems = violations();
  if (problems.empty()) return;
  std::string msg = "invalid sweep";
  if (!name.empty()) msg += " '" + name + "'";
  msg += ": ";
  for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
  throw ConfigError(msg);
}

std::size_t SweepSpec::row_count() const noexcept {
  return points.size() * (secondary ? secondary->values.size() : 1) * harvesters.size();
}

LinkScenario scenario_at(const SweepSpec& spec, double axis_value,
                         std::optional<double> secondary_value) {
  LinkScenario s = spec.base;
  switch (spec.axis) {
    case SweepAxis::p_tx:
      s.p_tx_w = axis_value;
      break;
    case SweepAxis::distance:
      s.distance_m = axis_value;
      break;
    case SweepAxis::dust_density:
      ensure_dust(s).n_t_per_m3 = axis_value;
      break;
    case SweepAxis::jitter_sigma:
      ensure_pointing(s).sigma_s_m = axis_value;
      break;
  }
  if (spec.secondary && secondary_value) {
    if (spec.secondary->axis == SecondaryAxis::rho_p) {
      ensure_dust(s).rho_p_m = *secondary_value;
    } else {
      ensure_pointing(s).beta_m = *secondary_value;
    }
  }
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::optional<double>> secondary_values;
  if (spec.secondary) {
    for (double v : spec.secondary->values) secondary_values.emplace_back(v);
  } else {
    secondary_values.emplace_back(std::nullopt);
  }

  std::vector<SweepRow> rows;
  rows.reserve(spec.row_count());
  for (double x : spec.points) {
    for (const auto& sv : secondary_values) {
      const LinkScenario s = scenario_at(spec, x, sv);
      const double p_rx_median = median_received_dbm(s).value;
      for (const auto& model : spec.harvesters) {
        SweepRow row;
        row.axis = spec.axis;
        row.axis_value = x;
        if (sv) {
          row.secondary = spec.secondary->axis;
          row.secondary_value = *sv;
        }
        row.area = s.terrain.name;
        row.harvester = model.name();
        row.p_tx_w = s.p_tx_w;
        row.distance_m = s.distance_m;
        row.p_rx_median_dbm = p_rx_median;
        row.stats = estimate_harvest(s, model, spec.mc);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

SweepSpec preset_base(const TerrainProfile& terrain) {
  SweepSpec spec;
  spec.base.terrain = terrain;
  spec.harvesters = {harvester_a(), harvester_b(), harvester_c()};
  spec.mc.quantiles = {0.05, 0.5, 0.95};
  return spec;
}

std::vector<Preset> make_presets() {
  std::vector<Preset> presets;
  const std::pair<char, TerrainProfile> areas[] = {{'a', TerrainProfile::area1()},
                                                   {'b', TerrainProfile::area2()}};
  const auto suffix = [](char c) { return std::string(1, c); };

  for (const auto& [tag, terrain] : areas) {
    SweepSpec spec = preset_base(terrain);
    spec.name = "fig3" + suffix(tag);
    spec.axis = SweepAxis::p_tx;
    spec.points = make_grid(1.0, 100.0, kPresetPoints, Spacing::log);
    presets.push_back({spec.name, "transmit power 1-100 W at 50 m, " + terrain.name + ", ideal", spec});
  }
  for (const auto& [tag, terrain] : areas) {
    SweepSpec spec = preset_base(terrain);
    spec.name = "fig5" + suffix(tag);
    spec.base.dust = DustStorm{};
    spec.axis = SweepAxis::dust_density;
    spec.points = make_grid(1e2, 1e10, kPresetPoints, Spacing::log);
    spec.secondary = SecondarySpec{SecondaryAxis::rho_p, {1e-4, 5e-3}};
    presets.push_back(
        {spec.name, "dust density 1e2-1e10 /m^3, rho_p 1e-4 and 5e-3 m, 10 W, 50 m, " + terrain.name,
         spec});
  }
  for (const auto& [tag, terrain] : areas) {
    SweepSpec spec = preset_base(terrain);
    spec.name = "fig6" + suffix(tag);
    spec.axis = SweepAxis::distance;
    spec.points = make_grid(10.0, 100.0, kPresetPoints, Spacing::linear);
    presets.push_back({spec.name, "distance 10-100 m at 10 W, " + terrain.name + ", ideal", spec});
  }
  for (const auto& [tag, terrain] : areas) {
    SweepSpec spec = preset_base(terrain);
    spec.name = "fig7" + suffix(tag);
    spec.base.pointing = PointingGeometry{0.5, default_beam_waist(spec.base.carrier.wavelength_m()), 0.0};
    spec.axis = SweepAxis::jitter_sigma;
    spec.points = make_grid(0.1, 1.0, kPresetPoints, Spacing::linear);
    spec.secondary = SecondarySpec{SecondaryAxis::beta, {0.5, 1.0}};
    presets.push_back(
        {spec.name, "pointing jitter 0.1-1 m, beta 0.5 and 1 m, 10 W, 50 m, " + terrain.name, spec});
  }
  return presets;
}

}  // namespace

const std::vector<Preset>& builtin_presets() {
  static const std::vector<Preset> presets = make_presets();
  return presets;
}

const Preset* find_preset(std::string_view name) noexcept {
  for (const auto& p : builtin_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::string preset_names_joined() {
  std::string out;
  for (const auto& p : builtin_presets()) out += (out.empty() ? "" : ", ") + p.name;
  return out;
}

}  // namespace marswpt
