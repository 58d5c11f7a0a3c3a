/*
 * marswpt C API.
 *
 * Opaque handles own C++ objects; every handle returned through an out
 * parameter must be released with its matching *_destroy function. Functions
 * return an mwpt_status; on failure mwpt_last_error() describes the problem
 * (the message is thread-local and valid until the next failing call on the
 * same thread).
 */
#ifndef MARSWPT_MARSWPT_H
#define MARSWPT_MARSWPT_H

#include <stddef.h>
#include <stdint.h>

#if defined(MWPT_BUILDING_LIBRARY)
#define MWPT_API __attribute__((visibility("default")))
#else
#define MWPT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mwpt_status {
  MWPT_OK = 0,
  MWPT_ERR_ARGUMENT = 1, /* null pointer, bad index */
  MWPT_ERR_CONFIG = 2,   /* rejected key, value or sweep definition */
  MWPT_ERR_DOMAIN = 3,   /* value outside a formula's domain */
  MWPT_ERR_INPUT = 4,    /* malformed CSV or model file, too few samples */
  MWPT_ERR_FIT = 5,      /* coefficient fit failed */
  MWPT_ERR_EVAL = 6,     /* harvester evaluated outside its positive denominator */
  MWPT_ERR_IO = 7,       /* file could not be read or written */
  MWPT_ERR_INTERNAL = 8
} mwpt_status;

typedef struct mwpt_config mwpt_config;
typedef struct mwpt_harvester mwpt_harvester;
typedef struct mwpt_table mwpt_table;

/* Median-channel budget. Losses positive; pointing_db = 10 log10(a0) <= 0. */
typedef struct mwpt_budget {
  double p_tx_dbm;
  double g_t_db;
  double g_r_db;
  double path_loss_db;
  double dust_db;
  double pointing_db;
  double p_rx_dbm;
} mwpt_budget;

typedef struct mwpt_stats {
  double mean_uw;
  double median_uw;
  double p05_uw;
  double p95_uw;
  double mean_p_rx_dbm;
  double mean_p_rx_mw;
  double median_channel_uw; /* harvest at the median-channel P_RX; 0 in sweep rows */
  uint64_t clamp_count;
  uint64_t extrapolated_count;
  uint64_t n_samples;
  uint64_t seed;
} mwpt_stats;

typedef struct mwpt_harvester_info {
  char name[64];
  double a2, a1, a0, b2, b1, b0;
  double valid_min_mw;
  double valid_max_mw;
  int is_constant; /* constant efficiency a0 percent, other coefficients unused */
} mwpt_harvester_info;

typedef struct mwpt_fit_report {
  double rms_residual_percent;
  int iterations;
  size_t n_samples;
} mwpt_fit_report;

/* One sweep row. secondary is "" when the sweep has no secondary axis. */
typedef struct mwpt_row {
  char axis[16];
  double axis_value;
  char secondary[16];
  double secondary_value;
  char area[32];
  char harvester[64];
  double p_tx_w;
  double distance_m;
  double p_rx_median_dbm;
  mwpt_stats stats;
} mwpt_row;

MWPT_API const char* mwpt_version(void);
MWPT_API const char* mwpt_last_error(void);
MWPT_API const char* mwpt_status_name(mwpt_status status);

/* ---- configuration ---------------------------------------------------- */

MWPT_API mwpt_status mwpt_config_create(mwpt_config** out);
MWPT_API void mwpt_config_destroy(mwpt_config* cfg);
/* Units are part of key names (distance_m, p_tx_w, ...). Unknown keys fail. */
MWPT_API mwpt_status mwpt_config_set(mwpt_config* cfg, const char* key, const char* value);
MWPT_API mwpt_status mwpt_config_load_file(mwpt_config* cfg, const char* path);
MWPT_API mwpt_status mwpt_config_load_text(mwpt_config* cfg, const char* text);

MWPT_API size_t mwpt_preset_count(void);
MWPT_API const char* mwpt_preset_name(size_t index);
MWPT_API const char* mwpt_preset_description(size_t index);

/* ---- harvesters ------------------------------------------------------- */

MWPT_API mwpt_status mwpt_harvester_builtin(const char* name, mwpt_harvester** out);
MWPT_API mwpt_status mwpt_harvester_load(const char* path, mwpt_harvester** out);
MWPT_API mwpt_status mwpt_harvester_save(const mwpt_harvester* h, const char* path);
MWPT_API void mwpt_harvester_destroy(mwpt_harvester* h);
MWPT_API mwpt_status mwpt_harvester_get_info(const mwpt_harvester* h, mwpt_harvester_info* out);
/* Clamped efficiency in percent. */
MWPT_API mwpt_status mwpt_harvester_efficiency(const mwpt_harvester* h, double p_rx_mw,
                                               double* out_percent);
MWPT_API mwpt_status mwpt_harvester_harvested_mw(const mwpt_harvester* h, double p_rx_mw,
                                                 double* out_mw);

/* Fits the rational model to a two-column CSV (input_power_mw,
 * efficiency_percent). Malformed input or fewer than 6 distinct powers
 * yields MWPT_ERR_INPUT; a failed fit MWPT_ERR_FIT. */
MWPT_API mwpt_status mwpt_fit_csv(const char* path, int refine, const char* name,
                                  mwpt_harvester** out, mwpt_fit_report* report);
MWPT_API mwpt_status mwpt_fit_samples(const double* input_power_mw,
                                      const double* efficiency_percent, size_t n, int refine,
                                      const char* name, mwpt_harvester** out,
                                      mwpt_fit_report* report);

/* ---- link ------------------------------------------------------------- */

MWPT_API mwpt_status mwpt_link_budget(const mwpt_config* cfg, mwpt_budget* out);

/* Monte Carlo estimate for the configured scenario. If n_probs > 0, the
 * quantiles at probs[i] are written to quantiles_uw[i]. */
MWPT_API mwpt_status mwpt_estimate(const mwpt_config* cfg, const mwpt_harvester* h,
                                   const double* probs, size_t n_probs, double* quantiles_uw,
                                   mwpt_stats* out);

/* ---- sweeps ----------------------------------------------------------- */

MWPT_API mwpt_status mwpt_sweep_run(const mwpt_config* cfg, mwpt_table** out);
MWPT_API void mwpt_table_destroy(mwpt_table* table);
MWPT_API size_t mwpt_table_row_count(const mwpt_table* table);
MWPT_API mwpt_status mwpt_table_get_row(const mwpt_table* table, size_t index, mwpt_row* out);
MWPT_API mwpt_status mwpt_table_write_csv(const mwpt_table* table, const char* path);
/* Writes the CSV into buf (NUL-terminated) if it fits; *needed receives the
 * size including the terminator. */
MWPT_API mwpt_status mwpt_table_csv(const mwpt_table* table, char* buf, size_t buf_size,
                                    size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* MARSWPT_MARSWPT_H */
