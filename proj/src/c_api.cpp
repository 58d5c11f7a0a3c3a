#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <set>
#include <sstream>
#include <string>

#include "marswpt/config.hpp"
#include "marswpt/errors.hpp"
#include "marswpt/harvester.hpp"
#include "marswpt/link.hpp"
#include "marswpt/marswpt.h"
#include "marswpt/sweep.hpp"

struct mwpt_config {
  marswpt::RunConfig config;
};

struct mwpt_harvester {
  marswpt::HarvesterModel model;
};

struct mwpt_table {
  std::vector<marswpt::SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;

mwpt_status fail(mwpt_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

/// Runs fn, translating exceptions into status codes.
template <typename Fn>
mwpt_status guarded(Fn&& fn) noexcept {
  try {
    return fn();
  } catch (const marswpt::ConfigError& e) {
    return fail(MWPT_ERR_CONFIG, e.what());
  } catch (const marswpt::DomainError& e) {
    return fail(MWPT_ERR_DOMAIN, e.what());
  } catch (const marswpt::InputError& e) {
    return fail(MWPT_ERR_INPUT, e.what());
  } catch (const marswpt::FitError& e) {
    return fail(MWPT_ERR_FIT, e.what());
  } catch (const marswpt::EvaluationError& e) {
    return fail(MWPT_ERR_EVAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MWPT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MWPT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MWPT_ERR_INTERNAL, "unknown error");
  }
}

template <std::size_t N>
void copy_string(char (&dst)[N], std::string_view src) {
  const std::size_t n = std::min(N - 1, src.size());
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

void fill_stats(const marswpt::HarvestStats& s, double median_channel_uw, mwpt_stats* out) {
  out->mean_uw = s.mean_uw;
  out->median_uw = s.median_uw;
  out->p05_uw = s.quantile_uw(0.05);
  out->p95_uw = s.quantile_uw(0.95);
  out->mean_p_rx_dbm = s.mean_p_rx_dbm;
  out->mean_p_rx_mw = s.mean_p_rx_mw;
  out->median_channel_uw = median_channel_uw;
  out->clamp_count = s.clamp_count;
  out->extrapolated_count = s.extrapolated_count;
  out->n_samples = s.n_samples;
  out->seed = s.seed;
}

mwpt_status finish_fit(std::span<const marswpt::EfficiencySample> samples, int refine,
                       const char* name, mwpt_harvester** out, mwpt_fit_report* report) {
  std::set<double> distinct;
  for (const auto& s : samples) distinct.insert(s.input_power_mw);
  if (distinct.size() < 6) {
    return fail(MWPT_ERR_INPUT, "need at least 6 distinct input powers to fit 6 coefficients (got " +
                                    std::to_string(distinct.size()) + ")");
  }
  marswpt::FitOptions options;
  options.refine = refine != 0;
  if (name && *name) options.name = name;
  auto result = marswpt::fit_model(samples, options);
  if (report) {
    report->rms_residual_percent = result.rms_residual_percent;
    report->iterations = result.iterations;
    report->n_samples = samples.size();
  }
  *out = new mwpt_harvester{std::move(result.model)};
  return MWPT_OK;
}

}  // namespace

extern "C" {

const char* mwpt_version(void) { return "1.0.0"; }

const char* mwpt_last_error(void) { return g_last_error.c_str(); }

const char* mwpt_status_name(mwpt_status status) {
  switch (status) {
    case MWPT_OK: return "ok";
    case MWPT_ERR_ARGUMENT: return "invalid argument";
    case MWPT_ERR_CONFIG: return "configuration error";
    case MWPT_ERR_DOMAIN: return "domain error";
    case MWPT_ERR_INPUT: return "input error";
    case MWPT_ERR_FIT: return "fit error";
    case MWPT_ERR_EVAL: return "evaluation error";
    case MWPT_ERR_IO: return "i/o error";
    case MWPT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

mwpt_status mwpt_config_create(mwpt_config** out) {
  if (!out) return fail(MWPT_ERR_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new mwpt_config{};
    return MWPT_OK;
  });
}

void mwpt_config_destroy(mwpt_config* cfg) { delete cfg; }

mwpt_status mwpt_config_set(mwpt_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->config.set(key, value);
    return MWPT_OK;
  });
}

mwpt_status mwpt_config_load_file(mwpt_config* cfg, const char* path) {
  if (!cfg || !path) return fail(MWPT_ERR_ARGUMENT, "null argument");
  std::ifstream in(path);
  if (!in) return fail(MWPT_ERR_IO, std::string("cannot open config file '") + path + "'");
  return guarded([&] {
    try {
      cfg->config.load(in);
    } catch (const marswpt::ConfigError& e) {
      throw marswpt::ConfigError(std::string(path) + ": " + e.what());
    }
    return MWPT_OK;
  });
}

mwpt_status mwpt_config_load_text(mwpt_config* cfg, const char* text) {
  if (!cfg || !text) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::istringstream in(text);
    cfg->config.load(in);
    return MWPT_OK;
  });
}

size_t mwpt_preset_count(void) { return marswpt::builtin_presets().size(); }

const char* mwpt_preset_name(size_t index) {
  const auto& presets = marswpt::builtin_presets();
  return index < presets.size() ? presets[index].name.c_str() : nullptr;
}

const char* mwpt_preset_description(size_t index) {
  const auto& presets = marswpt::builtin_presets();
  return index < presets.size() ? presets[index].description.c_str() : nullptr;
}

mwpt_status mwpt_harvester_builtin(const char* name, mwpt_harvester** out) {
  if (!name || !out) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto model = marswpt::builtin_harvester(name);
    if (!model) {
      return fail(MWPT_ERR_CONFIG,
                  std::string("unknown harvester '") + name + "' (valid: A, B, C)");
    }
    *out = new mwpt_harvester{std::move(*model)};
    return MWPT_OK;
  });
}

mwpt_status mwpt_harvester_load(const char* path, mwpt_harvester** out) {
  if (!path || !out) return fail(MWPT_ERR_ARGUMENT, "null argument");
  std::ifstream in(path);
  if (!in) return fail(MWPT_ERR_IO, std::string("cannot open model file '") + path + "'");
  return guarded([&] {
    try {
      *out = new mwpt_harvester{marswpt::read_model_file(in)};
    } catch (const marswpt::ConfigError& e) {
      throw marswpt::InputError(std::string(path) + ": " + e.what());
    } catch (const marswpt::InputError& e) {
      throw marswpt::InputError(std::string(path) + ": " + e.what());
    }
    return MWPT_OK;
  });
}

mwpt_status mwpt_harvester_save(const mwpt_harvester* h, const char* path) {
  if (!h || !path) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) return fail(MWPT_ERR_IO, std::string("cannot write '") + path + "'");
    marswpt::write_model_file(out, h->model);
    out.flush();
    if (!out) return fail(MWPT_ERR_IO, std::string("write failed for '") + path + "'");
    return MWPT_OK;
  });
}

void mwpt_harvester_destroy(mwpt_harvester* h) { delete h; }

mwpt_status mwpt_harvester_get_info(const mwpt_harvester* h, mwpt_harvester_info* out) {
  if (!h || !out) return fail(MWPT_ERR_ARGUMENT, "null argument");
  const auto& c = h->model.coefficients();
  copy_string(out->name, h->model.name());
  out->a2 = c.a2;
  out->a1 = c.a1;
  out->a0 = c.a0;
  out->b2 = c.b2;
  out->b1 = c.b1;
  out->b0 = c.b0;
  out->valid_min_mw = h->model.valid_range().min_mw;
  out->valid_max_mw = h->model.valid_range().max_mw;
  out->is_constant = h->model.is_constant() ? 1 : 0;
  return MWPT_OK;
}

mwpt_status mwpt_harvester_efficiency(const mwpt_harvester* h, double p_rx_mw, double* out_percent) {
  if (!h || !out_percent) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out_percent = marswpt::efficiency_percent(h->model, p_rx_mw);
    return MWPT_OK;
  });
}

mwpt_status mwpt_harvester_harvested_mw(const mwpt_harvester* h, double p_rx_mw, double* out_mw) {
  if (!h || !out_mw) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out_mw = marswpt::harvested_mw(h->model, p_rx_mw);
    return MWPT_OK;
  });
}

mwpt_status mwpt_fit_csv(const char* path, int refine, const char* name, mwpt_harvester** out,
                         mwpt_fit_report* report) {
  if (!path || !out) return fail(MWPT_ERR_ARGUMENT, "null argument");
  std::ifstream in(path);
  if (!in) return fail(MWPT_ERR_IO, std::string("cannot open '") + path + "'");
  return guarded([&] {
    std::vector<marswpt::EfficiencySample> samples;
    try {
      samples = marswpt::read_efficiency_csv(in);
    } catch (const marswpt::InputError& e) {
      throw marswpt::InputError(std::string(path) + ": " + e.what());
    }
    return finish_fit(samples, refine, name, out, report);
  });
}

mwpt_status mwpt_fit_samples(const double* input_power_mw, const double* efficiency_percent,
                             size_t n, int refine, const char* name, mwpt_harvester** out,
                             mwpt_fit_report* report) {
  if ((n > 0 && (!input_power_mw || !efficiency_percent)) || !out) {
    return fail(MWPT_ERR_ARGUMENT, "null argument");
  }
  return guarded([&] {
    std::vector<marswpt::EfficiencySample> samples(n);
    for (size_t i = 0; i < n; ++i) samples[i] = {input_power_mw[i], efficiency_percent[i]};
    return finish_fit(samples, refine, name, out, report);
  });
}

mwpt_status mwpt_link_budget(const mwpt_config* cfg, mwpt_budget* out) {
  if (!cfg || !out) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto b = marswpt::link_budget(cfg->config.scenario());
    *out = {b.p_tx_dbm, b.g_t_db, b.g_r_db, b.path_loss_db, b.dust_db, b.pointing_db, b.p_rx_dbm};
    return MWPT_OK;
  });
}

mwpt_status mwpt_estimate(const mwpt_config* cfg, const mwpt_harvester* h, const double* probs,
                          size_t n_probs, double* quantiles_uw, mwpt_stats* out) {
  if (!cfg || !h || !out || (n_probs > 0 && (!probs || !quantiles_uw))) {
    return fail(MWPT_ERR_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const auto scenario = cfg->config.scenario();
    auto mc = cfg->config.monte_carlo();
    mc.quantiles = {0.05, 0.95};
    mc.quantiles.insert(mc.quantiles.end(), probs, probs + n_probs);
    const auto stats = marswpt::estimate_harvest(scenario, h->model, mc);
    fill_stats(stats, marswpt::median_channel_harvest_uw(scenario, h->model), out);
    for (size_t i = 0; i < n_probs; ++i) quantiles_uw[i] = stats.quantiles_uw[2 + i].second;
    return MWPT_OK;
  });
}

mwpt_status mwpt_sweep_run(const mwpt_config* cfg, mwpt_table** out) {
  if (!cfg || !out) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto spec = cfg->config.sweep_spec();
    for (double q : {0.05, 0.95}) {
      if (std::find(spec.mc.quantiles.begin(), spec.mc.quantiles.end(), q) == spec.mc.quantiles.end()) {
        spec.mc.quantiles.push_back(q);
      }
    }
    *out = new mwpt_table{marswpt::run_sweep(spec)};
    return MWPT_OK;
  });
}

void mwpt_table_destroy(mwpt_table* table) { delete table; }

size_t mwpt_table_row_count(const mwpt_table* table) { return table ? table->rows.size() : 0; }

mwpt_status mwpt_table_get_row(const mwpt_table* table, size_t index, mwpt_row* out) {
  if (!table || !out) return fail(MWPT_ERR_ARGUMENT, "null argument");
  if (index >= table->rows.size()) return fail(MWPT_ERR_ARGUMENT, "row index out of range");
  return guarded([&] {
    const auto& row = table->rows[index];
    copy_string(out->axis, marswpt::to_string(row.axis));
    out->axis_value = row.axis_value;
    copy_string(out->secondary, row.secondary ? marswpt::to_string(*row.secondary) : "");
    out->secondary_value = row.secondary ? row.secondary_value : 0.0;
    copy_string(out->area, row.area);
    copy_string(out->harvester, row.harvester);
    out->p_tx_w = row.p_tx_w;
    out->distance_m = row.distance_m;
    out->p_rx_median_dbm = row.p_rx_median_dbm;
    fill_stats(row.stats, 0.0, &out->stats);
    return MWPT_OK;
  });
}

mwpt_status mwpt_table_write_csv(const mwpt_table* table, const char* path) {
  if (!table || !path) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(MWPT_ERR_IO, std::string("cannot write '") + path + "'");
    marswpt::write_sweep_csv(out, table->rows);
    out.flush();
    if (!out) return fail(MWPT_ERR_IO, std::string("write failed for '") + path + "'");
    return MWPT_OK;
  });
}

mwpt_status mwpt_table_csv(const mwpt_table* table, char* buf, size_t buf_size, size_t* needed) {
  if (!table || !needed || (buf_size > 0 && !buf)) return fail(MWPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::ostringstream out;
    marswpt::write_sweep_csv(out, table->rows);
    const std::string csv = out.str();
    *needed = csv.size() + 1;
    if (buf_size >= *needed) std::memcpy(buf, csv.c_str(), *needed);
    return MWPT_OK;
  });
}

}  // extern "C"
