#include "marswpt/link.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "marswpt/errors.hpp"
#include "text.hpp"

namespace marswpt {

namespace {

/// Type-7 (linear interpolation) sample quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Unit-mean exponential power gain of a Rayleigh amplitude.
double rayleigh_power_gain(Rng& rng) {
  // Open interval (0, 1) so the gain is strictly positive and finite.
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return -std::log(u);
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void LinkScenario::validate() const {
  std::vector<std::string> problems;
  if (!(p_tx_w > 0.0)) problems.push_back("p_tx_w must be > 0");
  if (!(distance_m > 0.0)) {
    problems.push_back("distance_m must be > 0 (got " + text::format_double(distance_m) + ")");
  }
  if (!std::isfinite(g_t_db)) problems.push_back("g_t_db must be finite");
  if (!std::isfinite(g_r_db)) problems.push_back("g_r_db must be finite");
  const auto collect = [&problems](auto&& check) {
    try {
      check();
    } catch (const ConfigError& e) {
      problems.emplace_back(e.what());
    }
  };
  collect([&] { terrain.validate(); });
  if (dust) collect([&] { dust->validate(); });
  if (pointing) collect([&] { pointing->validate(); });
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    throw ConfigError(msg);
  }
}

BudgetBreakdown link_budget(const LinkScenario& s) {
  s.validate();
  BudgetBreakdown b;
  b.p_tx_dbm = watts_to_dbm(s.p_tx_w).value;
  b.g_t_db = s.g_t_db;
  b.g_r_db = s.g_r_db;
  b.path_loss_db = path_loss_db(s.distance_m, s.carrier, s.terrain).value;
  b.dust_db = s.dust ? dust_attenuation_db(*s.dust, s.distance_m, s.carrier).value : 0.0;
  b.pointing_db = s.pointing ? 10.0 * std::log10(derive_model(*s.pointing).a0) : 0.0;
  b.p_rx_dbm = b.p_tx_dbm + b.g_t_db + b.g_r_db - b.path_loss_db - b.dust_db + b.pointing_db;
  return b;
}

PowerDbm median_received_dbm(const LinkScenario& s) { return {link_budget(s).p_rx_dbm}; }

double median_channel_harvest_uw(const LinkScenario& s, const HarvesterModel& model) {
  return harvested_mw(model, dbm_to_mw(median_received_dbm(s)).value) * 1e3;
}

void MonteCarloSettings::validate() const {
  std::vector<std::string> problems;
  if (n_samples < 1) problems.push_back("n_samples must be >= 1");
  for (double q : quantiles) {
    if (!(q > 0.0 && q < 1.0)) {
      problems.push_back("quantiles must lie in (0, 1) (got " + text::format_double(q) + ")");
    }
  }
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    throw ConfigError(msg);
  }
}

double HarvestStats::quantile_uw(double p) const {
  for (const auto& [prob, value] : quantiles_uw) {
    if (prob == p) return value;
  }
  throw std::out_of_range("quantile " + text::format_double(p) + " was not requested");
}

LinkEvaluator::LinkEvaluator(const LinkScenario& s) : scenario_(s) {
  const BudgetBreakdown b = link_budget(s);
  median_budget_no_pointing_ = b.p_rx_dbm - b.pointing_db;
  pointing_db_ = b.pointing_db;
  if (s.pointing) misalignment_ = derive_model(*s.pointing);
}

HarvestDraw LinkEvaluator::draw(const HarvesterModel& model, Rng& rng) const {
  double p_rx_dbm = median_budget_no_pointing_ - sample_shadowing(scenario_.terrain, rng);
  if (misalignment_) {
    const double r = sample_offset(scenario_.pointing->sigma_s_m, rng);
    p_rx_dbm += 10.0 * std::log10(fraction_at_offset(*misalignment_, r));
  }
  if (scenario_.small_scale == SmallScaleFading::rayleigh) {
    p_rx_dbm += 10.0 * std::log10(rayleigh_power_gain(rng));
  }

  HarvestDraw d;
  d.p_rx_dbm = p_rx_dbm;
  d.p_rx_mw = dbm_to_mw({p_rx_dbm}).value;
  const EfficiencyEvaluation e = model.evaluate(d.p_rx_mw);
  d.harvested_uw = d.p_rx_mw * e.efficiency_percent * 10.0;  // mW * %/100 * 1e3
  d.clamped = e.clamped;
  d.extrapolated = e.extrapolated;
  return d;
}

double sample_harvest_uw(const LinkScenario& s, const HarvesterModel& model, Rng& rng) {
  return LinkEvaluator(s).draw(model, rng).harvested_uw;
}

HarvestStats estimate_harvest(const LinkScenario& s, const HarvesterModel& model,
                              const MonteCarloSettings& mc) {
  mc.validate();
  const LinkEvaluator evaluator(s);
  std::vector<HarvestDraw> draws(mc.n_samples);
  parallel_for(mc.n_samples, mc.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::for_sample(mc.seed, i);
      draws[i] = evaluator.draw(model, rng);
    }
  });

  // Merge in sample order so the sums do not depend on the worker count.
  HarvestStats stats;
  stats.n_samples = mc.n_samples;
  stats.seed = mc.seed;
  double sum_uw = 0.0;
  double sum_dbm = 0.0;
  double sum_mw = 0.0;
  std::vector<double> harvested;
  harvested.reserve(draws.size());
  for (const auto& d : draws) {
    sum_uw += d.harvested_uw;
    sum_dbm += d.p_rx_dbm;
    sum_mw += d.p_rx_mw;
    stats.clamp_count += d.clamped ? 1 : 0;
    stats.extrapolated_count += d.extrapolated ? 1 : 0;
    harvested.push_back(d.harvested_uw);
  }
  const auto n = static_cast<double>(mc.n_samples);
  stats.mean_uw = sum_uw / n;
  stats.mean_p_rx_dbm = sum_dbm / n;
  stats.mean_p_rx_mw = sum_mw / n;

  std::sort(harvested.begin(), harvested.end());
  stats.median_uw = sorted_quantile(harvested, 0.5);
  for (double q : mc.quantiles) stats.quantiles_uw.emplace_back(q, sorted_quantile(harvested, q));
  return stats;
}

}  // namespace marswpt
