// Copyright 2026 The occulab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "error.hpp"
#include "rng.hpp"

namespace occulab::checks {
namespace {

double log_uniform(std::mt19937_64& engine, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(engine));
}

// Cov(B(b1) - B(a1), B(b2) - B(a2)) from differences only.
double increment_cov(double a1, double b1, double a2, double b2, double hurst) {
  const double p = 2.0 * hurst;
  return 0.5 * (std::pow(std::fabs(b1 - a2), p) + std::pow(std::fabs(a1 - b2), p) -
                std::pow(std::fabs(b1 - b2), p) - std::pow(std::fabs(a1 - a2), p));
}

class MarginTracker {
 public:
  void observe(double bound, double value, bool violated) {
    const double scale = std::fabs(bound) > 0.0 ? std::fabs(bound) : 1.0;
    worst_ = std::min(worst_, (bound - value) / scale);
    if (violated) ++violations_;
  }
  double worst() const { return worst_; }
  std::int64_t violations() const { return violations_; }

 private:
  double worst_ = std::numeric_limits<double>::infinity();
  std::int64_t violations_ = 0;
};

}  // namespace

double CheckReport::parameter(const std::string& key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "no parameter '" + key + "' in report");
}

double taylor_bracket(double u, double v, double hurst) {
  const double p = 2.0 * hurst;
  return std::expm1(p * std::log1p(u)) + std::expm1(p * std::log1p(v)) -
         std::expm1(p * std::log1p(u + v));
}

CovTrial evaluate_cov_trial(double t1, double t2, double t3, double t4, double hurst) {
  const double d2 = t2 - t1;
  const double d3 = t3 - t2;
  const double d4 = t4 - t3;
  const double u = d2 / d3;
  const double v = d4 / d3;
  CovTrial trial{};
  trial.expansion = std::pow(d3, 2.0 * hurst) * taylor_bracket(u, v, hurst);
  trial.exact_cov = increment_cov(t3, t4, t1, t2, hurst);
  const double gap = 0.5 - hurst;
  trial.bound_i = 2.0 * hurst * std::pow(u, gap) * std::pow(v, gap) *
                  std::pow(d2, hurst) * std::pow(d4, hurst);
  trial.bound_ii = 2.0 * std::pow(std::min(d2, d4) / std::max(d2, d4), hurst) *
                   std::pow(d2, hurst) * std::pow(d4, hurst);
  return trial;
}

CheckReport check_cov_bounds(std::int64_t trials, std::uint64_t seed) {
  require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be positive");
  std::mt19937_64 engine(derive_seed(seed, 0, 0xC0));
  std::uniform_real_distribution<double> hurst_dist(0.01, 0.49);
  MarginTracker tracker;
  double worst_mismatch = 0.0;
  std::int64_t mismatches = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const double hurst = hurst_dist(engine);
    const double t1 = log_uniform(engine, 1e-3, 1e3);
    const double d2 = log_uniform(engine, 1e-3, 1e3);
    const double d3 = log_uniform(engine, 1e-3, 1e3);
    const double d4 = log_uniform(engine, 1e-3, 1e3);
    const double t2 = t1 + d2;
    const double t3 = t2 + d3;
    const double t4 = t3 + d4;
    const CovTrial trial = evaluate_cov_trial(t1, t2, t3, t4, hurst);

    tracker.observe(trial.bound_i, trial.expansion, !(trial.expansion <= trial.bound_i));
    tracker.observe(trial.bound_ii, trial.expansion, !(trial.expansion <= trial.bound_ii));

    // The four-term covariance loses ~eps * t4^{2H} to cancellation.
    const double scale = std::pow(t4 - t1, 2.0 * hurst);
    const double mismatch = std::fabs(trial.expansion - 2.0 * std::fabs(trial.exact_cov)) / scale;
    worst_mismatch = std::max(worst_mismatch, mismatch);
    if (mismatch > 1e-12) ++mismatches;
  }
  CheckReport report;
  report.check_name = "cov";
  report.trials = trials;
  report.violations = tracker.violations() + mismatches;
  report.worst_margin = tracker.worst();
  report.parameters = {{"seed", static_cast<double>(seed)},
                       {"hurst_min", 0.01},
                       {"hurst_max", 0.49},
                       {"spacing_min", 1e-3},
                       {"spacing_max", 1e3},
                       {"expansion_mismatch_max", worst_mismatch},
                       {"expansion_mismatches", static_cast<double>(mismatches)}};
  return report;
}

CheckReport check_taylor_bound(int u_points, int v_points, int h_points) {
  require(u_points >= 1 && v_points >= 1 && h_points >= 1,
          ErrorCode::kInvalidArgument, "grid sizes must be positive");
  MarginTracker tracker;
  std::int64_t negatives = 0;
  double min_bracket = std::numeric_limits<double>::infinity();
  for (int k = 0; k < h_points; ++k) {
    const double hurst = 0.01 + 0.48 * (k + 0.5) / h_points;
    for (int i = 1; i <= u_points; ++i) {
      const double u = 10.0 * i / u_points;
      for (int j = 1; j <= v_points; ++j) {
        const double v = 10.0 * j / v_points;
        const double b = taylor_bracket(u, v, hurst);
        tracker.observe(2.0 * hurst * u, b, !(b <= 2.0 * hurst * u));
        tracker.observe(2.0 * hurst * v, b, !(b <= 2.0 * hurst * v));
        min_bracket = std::min(min_bracket, b);
        if (!(b >= 0.0)) ++negatives;
      }
    }
  }
  CheckReport report;
  report.check_name = "taylor";
  report.trials = static_cast<std::int64_t>(u_points) * v_points * h_points;
  report.violations = tracker.violations() + negatives;
  report.worst_margin = tracker.worst();
  report.parameters = {{"u_points", static_cast<double>(u_points)},
                       {"v_points", static_cast<double>(v_points)},
                       {"h_points", static_cast<double>(h_points)},
                       {"min_bracket", min_bracket},
                       {"negative_brackets", static_cast<double>(negatives)}};
  return report;
}

double lnd_variance(const std::vector<double>& times,
                    const std::vector<std::vector<double>>& vectors, double hurst) {
  const std::size_t n = vectors.size();
  require(times.size() == n + 1, ErrorCode::kInvalidArgument,
          "need one more time than vectors");
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < vectors[i].size(); ++c) dot += vectors[i][c] * vectors[j][c];
      const double cov =
          i == j ? std::pow(times[i + 1] - times[i], 2.0 * hurst)
                 : increment_cov(times[i], times[i + 1], times[j], times[j + 1], hurst);
      var += dot * cov;
    }
  }
  return var;
}

CheckReport check_lnd(int n_points, std::int64_t trials, std::uint64_t seed,
                      double hurst, int dim) {
  require(n_points >= 1 && n_points <= 4, ErrorCode::kInvalidArgument,
          "n_points must lie in 1..4");
  require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be positive");
  require(hurst > 0.0 && hurst < 1.0, ErrorCode::kDomain, "hurst must lie in (0,1)");
  require(dim >= 1, ErrorCode::kDomain, "dimension must be positive");
  std::mt19937_64 engine(derive_seed(seed, static_cast<std::uint64_t>(n_points), 0x1D));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<std::size_t>(n_points);
  std::vector<double> times(n + 1);
  std::vector<std::vector<double>> vectors(n, std::vector<double>(static_cast<std::size_t>(dim)));

  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  MarginTracker tracker;
  std::int64_t nonpositive = 0;
  const double ceiling = static_cast<double>(n_points) * (1.0 + 1e-12);
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    times[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) times[i] = times[i - 1] + log_uniform(engine, 1e-3, 1e3);
    double reference = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double magnitude = log_uniform(engine, 1e-2, 1e2);
      double norm2 = 0.0;
      for (double& c : vectors[i]) {
        c = magnitude * normal(engine);
        norm2 += c * c;
      }
      reference += norm2 * std::pow(times[i + 1] - times[i], 2.0 * hurst);
    }
    if (reference == 0.0) continue;
    const double ratio = lnd_variance(times, vectors, hurst) / reference;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    tracker.observe(static_cast<double>(n_points), ratio, !(ratio <= ceiling));
    if (!(ratio > 0.0)) ++nonpositive;
  }
  CheckReport report;
  report.check_name = "lnd";
  report.trials = trials;
  report.violations = tracker.violations() + nonpositive;
  report.worst_margin = tracker.worst();
  report.parameters = {{"n_points", static_cast<double>(n_points)},
                       {"hurst", hurst},
                       {"dim", static_cast<double>(dim)},
                       {"seed", static_cast<double>(seed)},
                       {"kappa2", static_cast<double>(n_points)},
                       {"min_ratio", min_ratio},
                       {"max_ratio", max_ratio}};
  return report;
}

double lower_lhs_log(double u, double v, double x2_norm, int dim) {
  const double d = dim;
  const double hurst = 1.0 / d;
  const double u2h = std::pow(u, 2.0 * hurst);
  return 0.5 * d * std::log(2.0 * std::numbers::pi) - hurst * d * std::log(u) +
         v * v * x2_norm * x2_norm / (2.0 * u2h);
}

CheckReport check_lower_inequality(int u_points, int v_points, int x_points) {
  require(u_points >= 2 && v_points >= 2 && x_points >= 2,
          ErrorCode::kInvalidArgument, "grid sizes must be at least 2");
  MarginTracker tracker;
  std::int64_t trials = 0;
  for (int dim = 1; dim <= 2; ++dim) {
    const double rhs_const = 0.5 * dim * std::log(2.0 * std::numbers::pi);
    for (int i = 0; i < u_points; ++i) {
      const double u = 0.1 * std::pow(1000.0, static_cast<double>(i) / (u_points - 1));
      const double rhs = rhs_const - std::log(u);
      for (int j = 0; j < v_points; ++j) {
        const double v = -10.0 + 20.0 * j / (v_points - 1);
        for (int k = 0; k < x_points; ++k) {
          const double x2 = 10.0 * k / (x_points - 1);
          const double lhs = lower_lhs_log(u, v, x2, dim);
          // Compare in log space; the slack is lhs - rhs >= 0.
          tracker.observe(lhs, rhs, !(lhs >= rhs));
          ++trials;
        }
      }
    }
  }
  CheckReport report;
  report.check_name = "lower";
  report.trials = trials;
  report.violations = tracker.violations();
  report.worst_margin = tracker.worst();
  report.parameters = {{"u_min", 0.1}, {"u_max", 100.0}, {"v_min", -10.0},
                       {"v_max", 10.0}, {"x2_max", 10.0},
                       {"u_points", static_cast<double>(u_points)},
                       {"v_points", static_cast<double>(v_points)},
                       {"x_points", static_cast<double>(x_points)}};
  return report;
}

}  // namespace occulab::checks
