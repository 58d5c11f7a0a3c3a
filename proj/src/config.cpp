#include "marswpt/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>

#include "marswpt/errors.hpp"
#include "text.hpp"

namespace marswpt {

namespace {

enum class Kind { real, positive, non_negative, count, seed, choice, real_list, probability_list,
                  harvester_list, path_list, preset };

struct KeySpec {
  std::string_view name;
  Kind kind;
  std::vector<std::string_view> choices{};
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"preset", Kind::preset},
      {"frequency_hz", Kind::positive},
      {"p_tx_w", Kind::positive},
      {"g_t_db", Kind::real},
      {"g_r_db", Kind::real},
      {"distance_m", Kind::positive},
      {"area", Kind::choice, {"area1", "area2"}},
      {"alpha", Kind::positive},
      {"sigma_db", Kind::non_negative},
      {"dust", Kind::choice, {"on", "off"}},
      {"n_t_per_m3", Kind::non_negative},
      {"rho_p_m", Kind::positive},
      {"eps_re", Kind::real},
      {"eps_im", Kind::positive},
      {"pointing", Kind::choice, {"on", "off"}},
      {"beta_m", Kind::positive},
      {"r_d_m", Kind::positive},
      {"sigma_s_m", Kind::non_negative},
      {"small_scale", Kind::choice, {"off", "rayleigh"}},
      {"n_samples", Kind::count},
      {"seed", Kind::seed},
      {"workers", Kind::seed},
      {"quantiles", Kind::probability_list},
      {"harvesters", Kind::harvester_list},
      {"harvester_files", Kind::path_list},
      {"axis", Kind::choice, {"p_tx", "distance", "dust_density", "jitter_sigma"}},
      {"axis_points", Kind::real_list},
      {"axis_min", Kind::real},
      {"axis_max", Kind::real},
      {"axis_count", Kind::count},
      {"axis_spacing", Kind::choice, {"linear", "log"}},
      {"secondary", Kind::choice, {"none", "rho_p", "beta"}},
      {"secondary_values", Kind::real_list},
  };
  return specs;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& spec : key_specs()) {
    if (spec.name == key) return &spec;
  }
  return nullptr;
}

[[noreturn]] void reject(std::string_view key, const std::string& why) {
  throw ConfigError(std::string(key) + " " + why);
}

double parse_number(std::string_view key, std::string_view value) {
  const auto v = text::parse_double(value);
  if (!v || !std::isfinite(*v)) reject(key, "expects a finite number (got '" + std::string(value) + "')");
  return *v;
}

std::vector<double> parse_number_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (auto field : text::split(value, ',')) out.push_back(parse_number(key, field));
  return out;
}

void validate_value(const KeySpec& spec, std::string_view value) {
  const auto key = spec.name;
  switch (spec.kind) {
    case Kind::real:
      parse_number(key, value);
      break;
    case Kind::positive:
      if (!(parse_number(key, value) > 0.0)) reject(key, "must be > 0 (got " + std::string(value) + ")");
      break;
    case Kind::non_negative:
      if (!(parse_number(key, value) >= 0.0)) reject(key, "must be >= 0 (got " + std::string(value) + ")");
      break;
    case Kind::count: {
      const auto v = text::parse_uint(value);
      if (!v || *v < 1) reject(key, "must be an integer >= 1 (got '" + std::string(value) + "')");
      break;
    }
    case Kind::seed:
      if (!text::parse_uint(value)) {
        reject(key, "must be a non-negative integer (got '" + std::string(value) + "')");
      }
      break;
    case Kind::choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        std::string options;
        for (auto c : spec.choices) options += (options.empty() ? "" : ", ") + std::string(c);
        reject(key, "must be one of {" + options + "} (got '" + std::string(value) + "')");
      }
      break;
    case Kind::real_list:
      parse_number_list(key, value);
      break;
    case Kind::probability_list:
      for (double q : parse_number_list(key, value)) {
        if (!(q > 0.0 && q < 1.0)) reject(key, "values must lie in (0, 1)");
      }
      break;
    case Kind::harvester_list:
      for (auto name : text::split(value, ',')) {
        if (!builtin_harvester(name)) {
          reject(key, "names an unknown harvester '" + std::string(name) + "' (valid: A, B, C)");
        }
      }
      break;
    case Kind::path_list:
      for (auto path : text::split(value, ',')) {
        if (path.empty()) reject(key, "contains an empty path");
      }
      break;
    case Kind::preset:
      if (!find_preset(value)) {
        reject(key, "names an unknown preset '" + std::string(value) +
                        "' (valid: " + preset_names_joined() + ")");
      }
      break;
  }
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& spec : key_specs()) out.emplace_back(spec.name);
    return out;
  }();
  return keys;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  key = text::trim(key);
  value = text::trim(value);
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError("unknown key '" + std::string(key) + "'");
  validate_value(*spec, value);
  values_.insert_or_assign(std::string(key), std::string(value));
}

void RunConfig::load(std::istream& in) {
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
    try {
      if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
      set(content.substr(0, eq), content.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    load(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

bool RunConfig::has(std::string_view key) const { return values_.find(key) != values_.end(); }

LinkScenario RunConfig::scenario() const {
  const auto get = [this](std::string_view key) -> const std::string* {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  };
  const auto number = [&](std::string_view key) { return *text::parse_double(*get(key)); };

  const Preset* preset = has("preset") ? find_preset(*get("preset")) : nullptr;
  LinkScenario s = preset ? preset->spec.base : LinkScenario{};

  if (has("frequency_hz")) {
    s.carrier = RfCarrier(number("frequency_hz"));
    if (s.pointing && !has("r_d_m")) s.pointing->r_d_m = default_beam_waist(s.carrier.wavelength_m());
  }
  if (has("p_tx_w")) s.p_tx_w = number("p_tx_w");
  if (has("g_t_db")) s.g_t_db = number("g_t_db");
  if (has("g_r_db")) s.g_r_db = number("g_r_db");
  if (has("distance_m")) s.distance_m = number("distance_m");
  if (has("area")) {
    s.terrain = *get("area") == "area2" ? TerrainProfile::area2() : TerrainProfile::area1();
  }
  if (has("alpha") || has("sigma_db")) {
    s.terrain.name = "custom";
    if (has("alpha")) s.terrain.alpha = number("alpha");
    if (has("sigma_db")) s.terrain.sigma_db = number("sigma_db");
  }

  std::vector<std::string> problems;
  const bool dust_keys = has("n_t_per_m3") || has("rho_p_m") || has("eps_re") || has("eps_im");
  if (has("dust") && *get("dust") == "off") {
    if (dust_keys) problems.emplace_back("dust = off conflicts with dust parameters");
    s.dust.reset();
  } else if (dust_keys || has("dust")) {
    if (!s.dust) s.dust = DustStorm{};
    if (has("n_t_per_m3")) s.dust->n_t_per_m3 = number("n_t_per_m3");
    if (has("rho_p_m")) s.dust->rho_p_m = number("rho_p_m");
    if (has("eps_re")) s.dust->eps_re = number("eps_re");
    if (has("eps_im")) s.dust->eps_im = number("eps_im");
  }

  const bool pointing_keys = has("beta_m") || has("r_d_m") || has("sigma_s_m");
  if (has("pointing") && *get("pointing") == "off") {
    if (pointing_keys) problems.emplace_back("pointing = off conflicts with pointing parameters");
    s.pointing.reset();
  } else if (pointing_keys || has("pointing")) {
    if (!s.pointing) {
      s.pointing = PointingGeometry{};
      s.pointing->r_d_m = default_beam_waist(s.carrier.wavelength_m());
    }
    if (has("beta_m")) s.pointing->beta_m = number("beta_m");
    if (has("r_d_m")) s.pointing->r_d_m = number("r_d_m");
    if (has("sigma_s_m")) s.pointing->sigma_s_m = number("sigma_s_m");
  }

  if (has("small_scale")) {
    s.small_scale = *get("small_scale") == "rayleigh" ? SmallScaleFading::rayleigh : SmallScaleFading::off;
  }
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    throw ConfigError(msg);
  }
  s.validate();
  return s;
}

MonteCarloSettings RunConfig::monte_carlo() const {
  MonteCarloSettings mc;
  if (has("preset")) mc = find_preset(values_.find("preset")->second)->spec.mc;
  if (auto it = values_.find("n_samples"); it != values_.end()) mc.n_samples = *text::parse_uint(it->second);
  if (auto it = values_.find("seed"); it != values_.end()) mc.seed = *text::parse_uint(it->second);
  if (auto it = values_.find("workers"); it != values_.end()) {
    mc.workers = static_cast<unsigned>(*text::parse_uint(it->second));
  }
  if (auto it = values_.find("quantiles"); it != values_.end()) {
    mc.quantiles = parse_number_list("quantiles", it->second);
  }
  mc.validate();
  return mc;
}

std::vector<HarvesterModel> RunConfig::harvesters() const {
  std::vector<HarvesterModel> out;
  const auto names = values_.find("harvesters");
  const auto files = values_.find("harvester_files");
  if (names == values_.end() && files == values_.end()) {
    if (has("preset")) return find_preset(values_.find("preset")->second)->spec.harvesters;
    return {harvester_a(), harvester_b(), harvester_c()};
  }
  if (names != values_.end()) {
    for (auto name : text::split(names->second, ',')) out.push_back(*builtin_harvester(name));
  }
  if (files != values_.end()) {
    for (auto path : text::split(files->second, ',')) {
      std::ifstream in{std::string(path)};
      if (!in) throw ConfigError("harvester_files: cannot open '" + std::string(path) + "'");
      try {
        out.push_back(read_model_file(in));
      } catch (const InputError& e) {
        throw ConfigError("harvester_files: " + std::string(path) + ": " + e.what());
      }
    }
  }
  return out;
}

SweepSpec RunConfig::sweep_spec() const {
  const auto get = [this](std::string_view key) -> std::string_view {
    return values_.find(key)->second;
  };
  std::vector<std::string> problems;
  const auto attempt = [&problems](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      problems.emplace_back(e.what());
    }
  };

  const Preset* preset = has("preset") ? find_preset(get("preset")) : nullptr;
  SweepSpec spec = preset ? preset->spec : SweepSpec{};
  spec.name = preset ? preset->name : "custom";
  attempt([&] { spec.base = scenario(); });
  attempt([&] { spec.mc = monte_carlo(); });
  attempt([&] { spec.harvesters = harvesters(); });

  if (has("axis")) {
    const auto axis = *parse_sweep_axis(get("axis"));
    if (axis != spec.axis || !preset) spec.points.clear();
    spec.axis = axis;
  } else if (!preset) {
    problems.emplace_back("axis is required when no preset is given");
  }

  const bool range_keys = has("axis_min") || has("axis_max") || has("axis_count") || has("axis_spacing");
  if (has("axis_points")) {
    if (range_keys) problems.emplace_back("axis_points conflicts with axis_min/axis_max/axis_count/axis_spacing");
    spec.points = parse_number_list("axis_points", get("axis_points"));
  } else if (range_keys) {
    if (!has("axis_min") || !has("axis_max")) {
      problems.emplace_back("axis range needs both axis_min and axis_max");
    } else {
      const double lo = *text::parse_double(get("axis_min"));
      const double hi = *text::parse_double(get("axis_max"));
      const std::size_t count = has("axis_count") ? *text::parse_uint(get("axis_count")) : 25;
      const Spacing spacing = has("axis_spacing") && get("axis_spacing") == "log" ? Spacing::log : Spacing::linear;
      attempt([&] { spec.points = make_grid(lo, hi, count, spacing); });
    }
  }

  if (has("secondary")) {
    const auto which = get("secondary");
    if (which == "none") {
      if (has("secondary_values")) problems.emplace_back("secondary = none conflicts with secondary_values");
      spec.secondary.reset();
    } else {
      const auto axis = *parse_secondary_axis(which);
      if (!spec.secondary || spec.secondary->axis != axis) {
        spec.secondary = SecondarySpec{axis, {}};
      }
    }
  }
  if (has("secondary_values")) {
    if (!spec.secondary) {
      if (!has("secondary")) problems.emplace_back("secondary_values needs secondary = rho_p or beta");
    } else {
      spec.secondary->values = parse_number_list("secondary_values", get("secondary_values"));
    }
  }

  for (auto& p : spec.violations()) {
    if (std::find(problems.begin(), problems.end(), p) == problems.end()) problems.push_back(std::move(p));
  }
  if (!problems.empty()) {
    std::string msg = "invalid sweep '" + spec.name + "': ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw ConfigError(msg);
  }
  return spec;
}

}  // namespace marswpt
