#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <string>
#include <vector>

#include "marswpt/errors.hpp"
#include "marswpt/harvester.hpp"
#include "text.hpp"

namespace marswpt {

namespace {

constexpr int kParams = 6;
using Params = Eigen::Matrix<double, kParams, 1>;

RationalCoefficients to_coefficients(const Params& x) {
  return {x[0], x[1], x[2], x[3], x[4], x[5]};
}

/// Residuals eta_k - model(P_k); false if any denominator is not positive.
bool residuals(std::span<const EfficiencySample> samples, const RationalCoefficients& c,
               Eigen::VectorXd& r) {
  r.resize(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double p = samples[k].input_power_mw;
    const double den = c.denominator(p);
    if (!(den > 0.0)) return false;
    r[static_cast<Eigen::Index>(k)] = samples[k].efficiency_percent - c.numerator(p) / den;
  }
  return true;
}

Eigen::MatrixXd jacobian(std::span<const EfficiencySample> samples, const RationalCoefficients& c) {
  Eigen::MatrixXd j(static_cast<Eigen::Index>(samples.size()), kParams);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double p = samples[k].input_power_mw;
    const double den = c.denominator(p);
    const double ratio = c.numerator(p) / (den * den);
    const auto row = static_cast<Eigen::Index>(k);
    j(row, 0) = -p * p / den;
    j(row, 1) = -p / den;
    j(row, 2) = -1.0 / den;
    j(row, 3) = ratio * p * p;
    j(row, 4) = ratio * p;
    j(row, 5) = ratio;
  }
  return j;
}

/// Solves the scaled system (columns normalised to unit length) with
/// column-pivoting QR; the scaling keeps coefficients of very different
/// magnitude on an equal footing for the rank test.
Eigen::VectorXd scaled_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, bool& full_rank) {
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    if (scale[i] == 0.0) scale[i] = 1.0;
  }
  const Eigen::MatrixXd scaled = a * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(1e-13);
  full_rank = qr.rank() == a.cols();
  return qr.solve(b).cwiseQuotient(scale);
}

Params weighted_linear_solve(std::span<const EfficiencySample> samples,
                             const Eigen::VectorXd& weight) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(n, kParams);
  Eigen::VectorXd b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double p = samples[static_cast<std::size_t>(k)].input_power_mw;
    const double eta = samples[static_cast<std::size_t>(k)].efficiency_percent;
    a.row(k) << p * p, p, 1.0, -eta * p * p, -eta * p, -eta;
    b[k] = eta * p * p * p;
    a.row(k) *= weight[k];
    b[k] *= weight[k];
  }
  bool full_rank = false;
  Params x = scaled_solve(a, b, full_rank);
  if (!full_rank) throw FitError("fit: linearised system is rank deficient");
  return x;
}

/// Sanathanan-Koerner iteration: rows re-weighted by 1/|D_prev(P)| so the
/// weighted algebraic residual approaches the true one. Keeps in `best` the
/// iterate with the smallest true residual and a positive denominator at
/// every sample.
void reweighted_runs(std::span<const EfficiencySample> samples, Eigen::VectorXd weight,
                     Params& best, double& best_sse) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::VectorXd r;
  Params x = weighted_linear_solve(samples, weight);
  for (int it = 0;; ++it) {
    if (residuals(samples, to_coefficients(x), r) && r.squaredNorm() < best_sse) {
      best = x;
      best_sse = r.squaredNorm();
    }
    if (it == 30) break;
    const RationalCoefficients c = to_coefficients(x);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double den = std::abs(c.denominator(samples[static_cast<std::size_t>(k)].input_power_mw));
      weight[k] = 1.0 / std::max(den, std::numeric_limits<double>::min());
    }
    weight /= weight.maxCoeff();
    const Params next = weighted_linear_solve(samples, weight);
    const double change = (next - x).cwiseAbs().cwiseQuotient(x.cwiseAbs().cwiseMax(1e-300)).maxCoeff();
    x = next;
    if (change < 1e-12) it = 29;
  }
}

/// Linear least squares on eta * D(P) = N(P). The plain solve weights rows by
/// the size of D, so the high-power end dominates and noisy data picks up
/// spurious poles at low power. Two reweighted runs are made, from unit
/// weights and from 1/(P^3 + Pg^3) with Pg the geometric mean power.
Params linearised_fit(std::span<const EfficiencySample> samples) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  Params best = weighted_linear_solve(samples, Eigen::VectorXd::Ones(n));
  double best_sse = std::numeric_limits<double>::infinity();

  double log_sum = 0.0;
  for (const auto& s : samples) log_sum += std::log(s.input_power_mw);
  const double pg = std::exp(log_sum / static_cast<double>(n));
  Eigen::VectorXd cubic(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double p = samples[static_cast<std::size_t>(k)].input_power_mw;
    cubic[k] = 1.0 / (p * p * p + pg * pg * pg);
  }
  cubic /= cubic.maxCoeff();

  reweighted_runs(samples, Eigen::VectorXd::Ones(n), best, best_sse);
  reweighted_runs(samples, cubic, best, best_sse);
  return best;
}

struct Refinement {
  Params x;
  int iterations = 0;
};

Refinement refine_fit(std::span<const EfficiencySample> samples, Params x, const FitOptions& opt) {
  Eigen::VectorXd r;
  if (!residuals(samples, to_coefficients(x), r)) {
    throw FitError("fit: initial denominator is not positive at every sample");
  }
  double sse = r.squaredNorm();
  double lambda = 1e-3;
  const auto n = static_cast<Eigen::Index>(samples.size());

  int it = 0;
  while (it < opt.max_iterations && sse > 0.0) {
    ++it;
    const Eigen::MatrixXd j = jacobian(samples, to_coefficients(x));
    Eigen::VectorXd scale = j.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < kParams; ++i) {
      if (scale[i] == 0.0) scale[i] = 1.0;
    }

    bool accepted = false;
    double new_sse = sse;
    Params trial = x;
    // Marquardt damping on the column-normalised Jacobian.
    while (lambda < 1e16) {
      Eigen::MatrixXd aug(n + kParams, kParams);
      aug.topRows(n) = j * scale.cwiseInverse().asDiagonal();
      aug.bottomRows(kParams) = std::sqrt(lambda) * Eigen::MatrixXd::Identity(kParams, kParams);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + kParams);
      rhs.topRows(n) = -r;
      const Eigen::VectorXd step =
          aug.colPivHouseholderQr().solve(rhs).cwiseQuotient(scale);
      trial = x + step;
      Eigen::VectorXd trial_r;
      if (residuals(samples, to_coefficients(trial), trial_r) &&
          trial_r.squaredNorm() < sse) {
        new_sse = trial_r.squaredNorm();
        r = std::move(trial_r);
        accepted = true;
        lambda = std::max(lambda / 10.0, 1e-12);
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;

    const double change = (sse - new_sse) / sse;
    x = trial;
    sse = new_sse;
    if (change < opt.tolerance) break;
  }
  return {x, it};
}

}  // namespace

FitResult fit_model(std::span<const EfficiencySample> samples, const FitOptions& options) {
  std::vector<double> powers;
  powers.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.input_power_mw > 0.0) || !std::isfinite(s.efficiency_percent)) {
      throw FitError("fit: samples need input_power_mw > 0 and a finite efficiency");
    }
    powers.push_back(s.input_power_mw);
  }
  std::sort(powers.begin(), powers.end());
  const auto distinct = std::unique(powers.begin(), powers.end()) - powers.begin();
  if (distinct < kParams) {
    throw FitError("fit: need at least 6 distinct input powers (got " + std::to_string(distinct) +
                   ")");
  }

  Params x = linearised_fit(samples);
  int iterations = 0;
  if (options.refine) {
    const Refinement refined = refine_fit(samples, x, options);
    x = refined.x;
    iterations = refined.iterations;
  }

  const PowerRange range{powers.front(), powers[static_cast<std::size_t>(distinct) - 1]};
  const RationalCoefficients coefficients = to_coefficients(x);
  std::optional<HarvesterModel> model;
  try {
    model.emplace(options.name, coefficients, range);
  } catch (const ConfigError& e) {
    throw FitError(std::string("fit: ") + e.what());
  }

  Eigen::VectorXd r;
  residuals(samples, coefficients, r);
  const double rms = std::sqrt(r.squaredNorm() / static_cast<double>(samples.size()));
  return {std::move(*model), rms, iterations};
}

std::vector<EfficiencySample> read_efficiency_csv(std::istream& in) {
  std::vector<EfficiencySample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 2 || text::parse_double(fields[0]) || text::parse_double(fields[1])) {
        throw InputError("expected header 'input_power_mw,efficiency_percent'", line_no);
      }
      continue;
    }
    if (fields.size() != 2) {
      throw InputError("expected 2 columns, found " + std::to_string(fields.size()), line_no);
    }
    const auto p = text::parse_double(fields[0]);
    const auto eta = text::parse_double(fields[1]);
    if (!p || !eta) throw InputError("non-numeric field", line_no);
    if (!(*p > 0.0)) throw InputError("input_power_mw must be > 0", line_no);
    if (!(*eta >= 0.0 && *eta <= 100.0)) {
      throw InputError("efficiency_percent must lie in [0, 100]", line_no);
    }
    samples.push_back({*p, *eta});
  }
  if (!header_seen) throw InputError("empty input; header required");
  return samples;
}

}  // namespace marswpt
