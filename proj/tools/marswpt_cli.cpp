// marswpt command-line tool: link, sweep, fit, presets.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "marswpt/marswpt.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(mwpt_config* p) const { mwpt_config_destroy(p); }
};
struct HarvesterDeleter {
  void operator()(mwpt_harvester* p) const { mwpt_harvester_destroy(p); }
};
struct TableDeleter {
  void operator()(mwpt_table* p) const { mwpt_table_destroy(p); }
};
using ConfigPtr = std::unique_ptr<mwpt_config, ConfigDeleter>;
using HarvesterPtr = std::unique_ptr<mwpt_harvester, HarvesterDeleter>;
using TablePtr = std::unique_ptr<mwpt_table, TableDeleter>;

/// Failure carrying the exit code the process should end with.
struct CommandError {
  int exit_code;
  std::string message;
};

int exit_code_for(mwpt_status status) {
  switch (status) {
    case MWPT_ERR_ARGUMENT:
    case MWPT_ERR_CONFIG:
    case MWPT_ERR_DOMAIN:
    case MWPT_ERR_INPUT:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void check(mwpt_status status) {
  if (status != MWPT_OK) throw CommandError{exit_code_for(status), mwpt_last_error()};
}

std::string num(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

/// Config keys exposed as --flags (underscores become dashes).
const std::vector<std::string> kScenarioKeys = {
    "frequency_hz", "p_tx_w",    "g_t_db",   "g_r_db",      "distance_m", "area",
    "alpha",        "sigma_db",  "dust",     "n_t_per_m3",  "rho_p_m",    "eps_re",
    "eps_im",       "pointing",  "beta_m",   "r_d_m",       "sigma_s_m",  "small_scale",
    "n_samples",    "seed",      "workers",  "quantiles"};

const std::vector<std::string> kSweepKeys = {"axis",      "axis_points",  "axis_min",
                                             "axis_max",  "axis_count",   "axis_spacing",
                                             "secondary", "secondary_values", "harvesters"};

std::string flag_name(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

/// Flag values collected during parsing, applied after any --config file.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void add_to(CLI::App& app, const std::vector<std::string>& keys) {
    for (const auto& key : keys) {
      app.add_option(flag_name(key), values[key], "config key " + key);
    }
  }

  ConfigPtr build(const CLI::App& app, const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    mwpt_config* raw = nullptr;
    check(mwpt_config_create(&raw));
    ConfigPtr cfg(raw);
    if (!config_file.empty()) check(mwpt_config_load_file(cfg.get(), config_file.c_str()));
    for (const auto& [key, value] : extra) check(mwpt_config_set(cfg.get(), key.c_str(), value.c_str()));
    for (const auto& [key, value] : values) {
      if (app.count(flag_name(key)) > 0) check(mwpt_config_set(cfg.get(), key.c_str(), value.c_str()));
    }
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// link

struct LinkArgs {
  ConfigFlags flags;
  std::vector<std::string> harvesters;
  std::vector<std::string> harvester_files;
  bool csv_only = false;
};

int run_link(const CLI::App& app, LinkArgs& args) {
  ConfigPtr cfg = args.flags.build(app);

  mwpt_budget budget{};
  check(mwpt_link_budget(cfg.get(), &budget));

  std::vector<HarvesterPtr> models;
  for (const auto& name : args.harvesters) {
    mwpt_harvester* h = nullptr;
    check(mwpt_harvester_builtin(name.c_str(), &h));
    models.emplace_back(h);
  }
  for (const auto& path : args.harvester_files) {
    mwpt_harvester* h = nullptr;
    check(mwpt_harvester_load(path.c_str(), &h));
    models.emplace_back(h);
  }
  if (models.empty()) {
    for (const char* name : {"A", "B", "C"}) {
      mwpt_harvester* h = nullptr;
      check(mwpt_harvester_builtin(name, &h));
      models.emplace_back(h);
    }
  }

  struct Result {
    mwpt_harvester_info info;
    mwpt_stats stats;
  };
  std::vector<Result> results;
  for (const auto& model : models) {
    Result r{};
    check(mwpt_harvester_get_info(model.get(), &r.info));
    check(mwpt_estimate(cfg.get(), model.get(), nullptr, 0, nullptr, &r.stats));
    results.push_back(r);
  }

  if (!args.csv_only) {
    std::printf("Median-channel link budget\n");
    std::printf("  transmit power     %9.3f dBm\n", budget.p_tx_dbm);
    std::printf("  transmit gain      %+9.3f dB\n", budget.g_t_db);
    std::printf("  receive gain       %+9.3f dB\n", budget.g_r_db);
    std::printf("  path loss          %+9.3f dB\n", -budget.path_loss_db);
    std::printf("  dust attenuation   %+9.3f dB\n", -budget.dust_db);
    std::printf("  pointing (a0)      %+9.3f dB\n", budget.pointing_db);
    std::printf("  median P_RX        %9.3f dBm\n\n", budget.p_rx_dbm);
    for (const auto& r : results) {
      const auto& s = r.stats;
      std::printf("Harvester %s (%llu samples, seed %llu)\n", r.info.name,
                  static_cast<unsigned long long>(s.n_samples), static_cast<unsigned long long>(s.seed));
      std::printf("  median-channel harvest  %.4g uW\n", s.median_channel_uw);
      std::printf("  mean %.4g uW, median %.4g uW, p05 %.4g uW, p95 %.4g uW\n", s.mean_uw,
                  s.median_uw, s.p05_uw, s.p95_uw);
      std::printf("  clamped %llu, extrapolated %llu\n\n",
                  static_cast<unsigned long long>(s.clamp_count),
                  static_cast<unsigned long long>(s.extrapolated_count));
    }
  }

  std::printf(
      "harvester,p_tx_dbm,path_loss_db,dust_db,pointing_db,p_rx_median_dbm,median_channel_uw,"
      "p_h_mean_uw,p_h_median_uw,p_h_p05_uw,p_h_p95_uw,clamp_count,extrapolated_count,n_samples,"
      "seed\n");
  for (const auto& r : results) {
    const auto& s = r.stats;
    std::printf("%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%llu,%llu,%llu,%llu\n", r.info.name,
                num(budget.p_tx_dbm).c_str(), num(budget.path_loss_db).c_str(),
                num(budget.dust_db).c_str(), num(budget.pointing_db).c_str(),
                num(budget.p_rx_dbm).c_str(), num(s.median_channel_uw).c_str(),
                num(s.mean_uw).c_str(), num(s.median_uw).c_str(), num(s.p05_uw).c_str(),
                num(s.p95_uw).c_str(), static_cast<unsigned long long>(s.clamp_count),
                static_cast<unsigned long long>(s.extrapolated_count),
                static_cast<unsigned long long>(s.n_samples), static_cast<unsigned long long>(s.seed));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  ConfigFlags flags;
  std::string preset;
  std::string output;
  std::vector<std::string> harvester_files;
};

int run_sweep(const CLI::App& app, SweepArgs& args) {
  std::vector<std::pair<std::string, std::string>> extra;
  if (!args.preset.empty()) extra.emplace_back("preset", args.preset);
  if (!args.harvester_files.empty()) {
    std::string joined;
    for (const auto& f : args.harvester_files) joined += (joined.empty() ? "" : ",") + f;
    extra.emplace_back("harvester_files", joined);
  }
  ConfigPtr cfg = args.flags.build(app, extra);

  mwpt_table* raw = nullptr;
  check(mwpt_sweep_run(cfg.get(), &raw));
  TablePtr table(raw);

  if (args.output.empty() || args.output == "-") {
    std::size_t needed = 0;
    check(mwpt_table_csv(table.get(), nullptr, 0, &needed));
    std::string buf(needed, '\0');
    check(mwpt_table_csv(table.get(), buf.data(), buf.size(), &needed));
    std::fputs(buf.c_str(), stdout);
  } else {
    check(mwpt_table_write_csv(table.get(), args.output.c_str()));
    std::fprintf(stderr, "wrote %zu rows to %s\n", mwpt_table_row_count(table.get()),
                 args.output.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string input;
  std::string output;
  std::string name = "fitted";
  bool no_refine = false;
};

int run_fit(FitArgs& args) {
  mwpt_harvester* raw = nullptr;
  mwpt_fit_report report{};
  check(mwpt_fit_csv(args.input.c_str(), args.no_refine ? 0 : 1, args.name.c_str(), &raw, &report));
  HarvesterPtr model(raw);
  mwpt_harvester_info info{};
  check(mwpt_harvester_get_info(model.get(), &info));

  std::printf("name = %s\n", info.name);
  std::printf("a2 = %s\na1 = %s\na0 = %s\n", num(info.a2).c_str(), num(info.a1).c_str(),
              num(info.a0).c_str());
  std::printf("b2 = %s\nb1 = %s\nb0 = %s\n", num(info.b2).c_str(), num(info.b1).c_str(),
              num(info.b0).c_str());
  std::printf("rms_residual_percent = %s\n", num(report.rms_residual_percent).c_str());
  std::printf("valid_range_mw = [%s, %s]\n", num(info.valid_min_mw).c_str(),
              num(info.valid_max_mw).c_str());
  std::printf("samples = %zu, refinement iterations = %d\n", report.n_samples, report.iterations);

  if (!args.output.empty()) check(mwpt_harvester_save(model.get(), args.output.c_str()));
  return 0;
}

int run_presets() {
  for (std::size_t i = 0; i < mwpt_preset_count(); ++i) {
    std::printf("%-6s  %s\n", mwpt_preset_name(i), mwpt_preset_description(i));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless power transfer to zero-energy devices on the Martian surface"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mwpt_version());

  LinkArgs link_args;
  auto* link = app.add_subcommand("link", "single-point link budget and harvest statistics");
  link->add_option("--config", link_args.flags.config_file, "key = value config file");
  link_args.flags.add_to(*link, kScenarioKeys);
  link->add_option("--harvester", link_args.harvesters, "built-in harvester A, B or C (repeatable)");
  link->add_option("--harvester-file", link_args.harvester_files, "model file written by fit");
  link->add_flag("--csv", link_args.csv_only, "print only the machine-readable block");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep written as CSV");
  sweep->add_option("--preset", sweep_args.preset, "built-in sweep (see `presets`)");
  sweep->add_option("--config", sweep_args.flags.config_file, "key = value config file");
  sweep->add_option("-o,--output", sweep_args.output, "output CSV path (default stdout)");
  sweep->add_option("--harvester-file", sweep_args.harvester_files, "extra model file(s)");
  sweep_args.flags.add_to(*sweep, kScenarioKeys);
  sweep_args.flags.add_to(*sweep, kSweepKeys);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit the rational efficiency model to measured points");
  fit->add_option("input", fit_args.input, "CSV: input_power_mw,efficiency_percent")->required();
  fit->add_option("-o,--output", fit_args.output, "write a model file for --harvester-file");
  fit->add_option("--name", fit_args.name, "model name");
  fit->add_flag("--no-refine", fit_args.no_refine, "skip the nonlinear refinement");

  app.add_subcommand("presets", "list built-in sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*link) return run_link(*link, link_args);
    if (*sweep) return run_sweep(*sweep, sweep_args);
    if (*fit) return run_fit(fit_args);
    return run_presets();
  } catch (const CommandError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.exit_code;
  }
}
