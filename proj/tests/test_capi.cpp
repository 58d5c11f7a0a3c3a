#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "marswpt/marswpt.h"

extern "C" int mwpt_c_smoke(void);

namespace {

struct Config {
  mwpt_config* ptr = nullptr;
  Config() { REQUIRE(mwpt_config_create(&ptr) == MWPT_OK); }
  ~Config() { mwpt_config_destroy(ptr); }
  mwpt_status set(const char* k, const char* v) { return mwpt_config_set(ptr, k, v); }
};

struct Harvester {
  mwpt_harvester* ptr = nullptr;
  ~Harvester() { mwpt_harvester_destroy(ptr); }
};

std::filesystem::path scratch(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("marswpt_capi_") + name);
}

}  // namespace

TEST_CASE("header compiles as C") { CHECK(mwpt_c_smoke() == 1); }

TEST_CASE("version and status names") {
  CHECK(std::string(mwpt_version()) == "1.0.0");
  CHECK(std::string(mwpt_status_name(MWPT_ERR_CONFIG)) == "configuration error");
  CHECK(std::string(mwpt_status_name(MWPT_OK)) == "ok");
  CHECK(mwpt_preset_count() == 8);
  CHECK(std::string(mwpt_preset_name(0)) == "fig3a");
  CHECK(mwpt_preset_name(8) == nullptr);
  CHECK(std::strlen(mwpt_preset_description(7)) > 0);
}

TEST_CASE("null arguments") {
  CHECK(mwpt_config_create(nullptr) == MWPT_ERR_ARGUMENT);
  CHECK(mwpt_config_set(nullptr, "seed", "1") == MWPT_ERR_ARGUMENT);
  CHECK(mwpt_link_budget(nullptr, nullptr) == MWPT_ERR_ARGUMENT);
  CHECK(std::strlen(mwpt_last_error()) > 0);
  mwpt_config_destroy(nullptr);
  mwpt_harvester_destroy(nullptr);
  mwpt_table_destroy(nullptr);
}

TEST_CASE("configuration errors set the message") {
  Config cfg;
  CHECK(cfg.set("distance_m", "-5") == MWPT_ERR_CONFIG);
  CHECK(std::string(mwpt_last_error()).find("distance_m") != std::string::npos);
  CHECK(cfg.set("warp", "9") == MWPT_ERR_CONFIG);
  CHECK(mwpt_config_load_text(cfg.ptr, "seed = 3\nnope = 1\n") == MWPT_ERR_CONFIG);
  CHECK(std::string(mwpt_last_error()).find("line 2") != std::string::npos);
  CHECK(mwpt_config_load_file(cfg.ptr, "/nonexistent.cfg") == MWPT_ERR_IO);
}

TEST_CASE("budget and estimate") {
  Config cfg;
  mwpt_budget b{};
  REQUIRE(mwpt_link_budget(cfg.ptr, &b) == MWPT_OK);
  CHECK(std::abs(b.p_rx_dbm + 10.66) < 0.05);
  CHECK(b.p_tx_dbm == doctest::Approx(40.0));

  Harvester c;
  REQUIRE(mwpt_harvester_builtin("C", &c.ptr) == MWPT_OK);
  REQUIRE(cfg.set("sigma_db", "0") == MWPT_OK);
  REQUIRE(cfg.set("n_samples", "100") == MWPT_OK);
  const double probs[] = {0.25, 0.75};
  double q[2] = {};
  mwpt_stats st{};
  REQUIRE(mwpt_estimate(cfg.ptr, c.ptr, probs, 2, q, &st) == MWPT_OK);
  CHECK(std::abs(st.mean_uw - 42.76) < 0.01);
  CHECK(st.median_channel_uw == doctest::Approx(st.mean_uw));
  CHECK(q[0] == doctest::Approx(q[1]));
  CHECK(st.n_samples == 100);
  CHECK(mwpt_estimate(cfg.ptr, c.ptr, probs, 2, nullptr, &st) == MWPT_ERR_ARGUMENT);
}

TEST_CASE("harvester access") {
  Harvester a;
  CHECK(mwpt_harvester_builtin("Z", &a.ptr) == MWPT_ERR_CONFIG);
  REQUIRE(mwpt_harvester_builtin("a", &a.ptr) == MWPT_OK);
  mwpt_harvester_info info{};
  REQUIRE(mwpt_harvester_get_info(a.ptr, &info) == MWPT_OK);
  CHECK(std::string(info.name) == "A");
  CHECK(info.a1 == 181.2);
  double eta = 0.0, mw = 0.0;
  REQUIRE(mwpt_harvester_efficiency(a.ptr, 1.0, &eta) == MWPT_OK);
  CHECK(std::abs(eta - 66.67) < 0.01);
  REQUIRE(mwpt_harvester_harvested_mw(a.ptr, 1.0, &mw) == MWPT_OK);
  CHECK(mw == doctest::Approx(eta / 100.0));
  CHECK(mwpt_harvester_efficiency(a.ptr, -1.0, &eta) == MWPT_ERR_DOMAIN);

  const auto path = scratch("a.model");
  REQUIRE(mwpt_harvester_save(a.ptr, path.c_str()) == MWPT_OK);
  Harvester back;
  REQUIRE(mwpt_harvester_load(path.c_str(), &back.ptr) == MWPT_OK);
  double eta2 = 0.0;
  mwpt_harvester_efficiency(back.ptr, 1.0, &eta2);
  CHECK(eta2 == eta);
  std::filesystem::remove(path);
  CHECK(mwpt_harvester_load("/nonexistent.model", &back.ptr) == MWPT_ERR_IO);
}

TEST_CASE("fitting through the C API") {
  std::vector<double> p, e;
  for (int i = 0; i < 20; ++i) {
    const double x = 1e-3 * std::pow(1e4, i / 19.0);
    p.push_back(x);
    e.push_back((114.6 * x * x - 1.613 * x + 7.66e-3) / (x * x * x + 1.133 * x * x + 9.84e-3 * x + 4.5e-3));
  }
  Harvester h;
  mwpt_fit_report rep{};
  REQUIRE(mwpt_fit_samples(p.data(), e.data(), p.size(), 1, "fit", &h.ptr, &rep) == MWPT_OK);
  CHECK(rep.rms_residual_percent < 0.1);
  CHECK(rep.n_samples == 20);

  Harvester few;
  CHECK(mwpt_fit_samples(p.data(), e.data(), 4, 1, "fit", &few.ptr, &rep) == MWPT_ERR_INPUT);

  const auto path = scratch("bad.csv");
  {
    std::ofstream out(path);
    out << "input_power_mw,efficiency_percent\n0.1,20\n0.2,x\n";
  }
  CHECK(mwpt_fit_csv(path.c_str(), 1, "x", &few.ptr, &rep) == MWPT_ERR_INPUT);
  CHECK(std::string(mwpt_last_error()).find("line 3") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("sweep table") {
  Config cfg;
  REQUIRE(cfg.set("preset", "fig6a") == MWPT_OK);
  REQUIRE(cfg.set("n_samples", "200") == MWPT_OK);
  REQUIRE(cfg.set("axis_points", "10,20") == MWPT_OK);
  mwpt_table* table = nullptr;
  REQUIRE(mwpt_sweep_run(cfg.ptr, &table) == MWPT_OK);
  CHECK(mwpt_table_row_count(table) == 6);
  mwpt_row row{};
  REQUIRE(mwpt_table_get_row(table, 5, &row) == MWPT_OK);
  CHECK(std::string(row.axis) == "distance");
  CHECK(row.axis_value == 20.0);
  CHECK(std::string(row.harvester) == "C");
  CHECK(std::string(row.secondary).empty());
  CHECK(mwpt_table_get_row(table, 6, &row) == MWPT_ERR_ARGUMENT);

  std::size_t needed = 0;
  CHECK(mwpt_table_csv(table, nullptr, 0, &needed) == MWPT_OK);
  REQUIRE(needed > 0);
  std::vector<char> buf(needed);
  REQUIRE(mwpt_table_csv(table, buf.data(), buf.size(), &needed) == MWPT_OK);
  const std::string csv(buf.data());
  CHECK(csv.rfind("axis,axis_value", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(mwpt_table_write_csv(table, "/nonexistent/dir/out.csv") == MWPT_ERR_IO);
  mwpt_table_destroy(table);

  Config bad;
  REQUIRE(bad.set("harvesters", "A") == MWPT_OK);
  CHECK(mwpt_sweep_run(bad.ptr, &table) == MWPT_ERR_CONFIG);
}
