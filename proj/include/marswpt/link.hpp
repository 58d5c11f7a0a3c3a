#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "marswpt/harvester.hpp"
#include "marswpt/pointing.hpp"
#include "marswpt/propagation.hpp"
#include "marswpt/quantities.hpp"
#include "marswpt/random.hpp"

namespace marswpt {

enum class SmallScaleFading { off, rayleigh };

struct LinkScenario {
  RfCarrier carrier{kDefaultFrequencyHz};
  double p_tx_w = 10.0;
  double g_t_db = 28.0;
  double g_r_db = 0.0;
  double distance_m = 50.0;
  TerrainProfile terrain = TerrainProfile::area1();
  std::optional<DustStorm> dust;
  std::optional<PointingGeometry> pointing;
  SmallScaleFading small_scale = SmallScaleFading::off;

  /// Throws ConfigError listing every violated invariant.
  void validate() const;
};

/// Median-channel budget, term by term. Losses are positive numbers;
/// pointing_db is 10*log10(a0) and therefore <= 0.
struct BudgetBreakdown {
  double p_tx_dbm = 0.0;
  double g_t_db = 0.0;
  double g_r_db = 0.0;
  double path_loss_db = 0.0;
  double dust_db = 0.0;
  double pointing_db = 0.0;
  double p_rx_dbm = 0.0;
};

BudgetBreakdown link_budget(const LinkScenario& s);

/// P_TX + G_T + G_R - PL(median) - P_DS + 10 log10(a0).
PowerDbm median_received_dbm(const LinkScenario& s);

/// Harvested power for the median channel, in microwatts.
double median_channel_harvest_uw(const LinkScenario& s, const HarvesterModel& model);

struct MonteCarloSettings {
  std::size_t n_samples = 20'000;
  std::uint64_t seed = 1;
  std::vector<double> quantiles{0.05, 0.5, 0.95};
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;

  void validate() const;
};

struct HarvestStats {
  double mean_uw = 0.0;
  double median_uw = 0.0;
  /// (probability, value in microwatts), in the order requested.
  std::vector<std::pair<double, double>> quantiles_uw;
  double mean_p_rx_dbm = 0.0;
  double mean_p_rx_mw = 0.0;
  std::size_t clamp_count = 0;
  std::size_t extrapolated_count = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  /// Value for probability p; throws std::out_of_range if p was not requested.
  double quantile_uw(double p) const;

  friend bool operator==(const HarvestStats&, const HarvestStats&) = default;
};

/// One realisation of the channel and harvester.
struct HarvestDraw {
  double p_rx_dbm = 0.0;
  double p_rx_mw = 0.0;
  double harvested_uw = 0.0;
  bool clamped = false;
  bool extrapolated = false;
};

/// Scenario with its deterministic parts evaluated once.
class LinkEvaluator {
 public:
  explicit LinkEvaluator(const LinkScenario& s);

  const LinkScenario& scenario() const noexcept { return scenario_; }
  double median_p_rx_dbm() const noexcept { return median_budget_no_pointing_ + pointing_db_; }
  const std::optional<MisalignmentModel>& misalignment() const noexcept { return misalignment_; }

  /// Draw order per stream: shadowing, pointing offset, small-scale gain.
  HarvestDraw draw(const HarvesterModel& model, Rng& rng) const;

 private:
  LinkScenario scenario_;
  double median_budget_no_pointing_ = 0.0;
  double pointing_db_ = 0.0;
  std::optional<MisalignmentModel> misalignment_;
};

/// One Monte Carlo draw of harvested power in microwatts.
double sample_harvest_uw(const LinkScenario& s, const HarvesterModel& model, Rng& rng);

/// Ensemble statistics over mc.n_samples draws. Sample i uses
/// Rng::for_sample(mc.seed, i); the result is bit-identical for any worker count.
HarvestStats estimate_harvest(const LinkScenario& s, const HarvesterModel& model,
                              const MonteCarloSettings& mc);

}  // namespace marswpt
