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

#include "limitlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "constants.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace occulab::limitlab {
namespace {

constexpr std::int64_t kMinReplicas = 100;
// Bootstrap streams live in their own family so they never alias a replica.
constexpr std::uint64_t kBootstrapFamily = 0x5EEDB007ULL;

std::vector<double> draw(const occupation::Engine& engine, std::int64_t replicas,
                         std::uint64_t seed, int workers, std::size_t horizons) {
  std::vector<double> out(static_cast<std::size_t>(replicas) * horizons);
  parallel_for(static_cast<std::size_t>(replicas), workers, [&](std::size_t r) {
    const auto values = engine.realize(seed, r);
    std::copy(values.begin(), values.end(), out.begin() + static_cast<std::ptrdiff_t>(r * horizons));
  });
  return out;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

LimitTarget LimitTarget::make(double c_fd, double t) {
  return {c_fd, t, c_fd * std::sqrt(t / 2.0)};
}

double target_moment(int m, double t, double c) {
  require(m >= 1, ErrorCode::kDomain, "moment index must be positive");
  return std::pow(c, 2 * m) * factorial(2 * m) * std::pow(t, m) / std::pow(2.0, m);
}

double target_moment_order(int order, double t, double c) {
  require(order >= 1, ErrorCode::kDomain, "moment order must be positive");
  return order % 2 == 1 ? 0.0 : target_moment(order / 2, t, c);
}

MomentSummary summarize(std::span<const double> values, const stats::Cdf& cdf,
                        std::uint64_t seed) {
  MomentSummary s;
  s.replicas = static_cast<std::int64_t>(values.size());
  for (int k = 1; k <= kMaxOrder; ++k) {
    const auto e = stats::raw_moment(values, k);
    s.estimate[k - 1] = e.value;
    s.se[k - 1] = e.se;
  }
  s.mean = stats::raw_moment(values, 1);
  s.variance = stats::variance(values);
  s.kurtosis = stats::excess_kurtosis(values);
  s.ks_distance = stats::ks_distance(values, cdf);
  s.ks_se = stats::ks_bootstrap_se(values, cdf, seed);
  return s;
}

SecondOrderResult run_second_order(const functions::TestFunction& f,
                                   const occupation::OccupationConfig& config,
                                   std::int64_t replicas, std::uint64_t seed,
                                   int workers) {
  require(replicas >= kMinReplicas, ErrorCode::kInvalidArgument,
          "second-order runs need at least 100 replicas");
  const auto constant = constants::c_fd(f);
  SecondOrderResult result;
  result.target = LimitTarget::make(constant.c_fd, config.t);

  const occupation::Engine engine(f, config, {config.t});
  result.samples = draw(engine, replicas, seed, workers, 1);

  const double c = constant.c_fd;
  std::vector<double> standardized(result.samples);
  if (c > 0.0) {
    for (double& v : standardized) v /= c;
  }
  const double scale = std::sqrt(config.t / 2.0);
  result.summary = summarize(
      standardized, [scale](double x) { return stats::laplace_cdf(x, scale); },
      derive_seed(seed, kBootstrapFamily, 0));
  for (int k = 1; k <= kMaxOrder; ++k) {
    result.summary.target[k - 1] = target_moment_order(k, config.t, 1.0);
  }
  return result;
}

FirstOrderResult run_first_order(const functions::TestFunction& f,
                                 const occupation::OccupationConfig& config,
                                 std::int64_t replicas, std::uint64_t seed,
                                 int workers) {
  using functions::Kind;
  require(replicas >= kMinReplicas, ErrorCode::kInvalidArgument,
          "first-order runs need at least 100 replicas");
  require(f.kind() == Kind::kZero ||
              (f.kind() == Kind::kPlainGaussian && f.amplitude() >= 0.0),
          ErrorCode::kInvalidArgument,
          "the first-order law needs a nonnegative integrable f (gauss or zero)");
  FirstOrderResult result;
  const int d = f.dim();
  result.target_mean =
      config.t * f.integral() / std::pow(2.0 * std::numbers::pi, 0.5 * d);

  const occupation::Engine engine(f, config, {config.t});
  result.samples = draw(engine, replicas, seed, workers, 1);
  // Engine normalises by sqrt(n); the first-order law wants 1/n.
  const double rescale = 1.0 / std::sqrt(config.n);
  for (double& v : result.samples) v *= rescale;

  const double mean = result.target_mean;
  result.summary = summarize(
      result.samples, [mean](double x) { return stats::exponential_cdf(x, mean); },
      derive_seed(seed, kBootstrapFamily, 1));
  for (int k = 1; k <= kMaxOrder; ++k) {
    result.summary.target[k - 1] = factorial(k) * std::pow(mean, k);
  }
  return result;
}

ZProcessSample simulate_z(double t, std::int64_t walk_steps, std::uint64_t seed,
                          std::uint64_t replica, ZMode mode, double budget_factor) {
  require(std::isfinite(t) && t >= 0.0, ErrorCode::kDomain, "t must be nonnegative");
  require(walk_steps >= kMinWalkSteps, ErrorCode::kInvalidArgument,
          "walk_steps must be at least 10^4");
  ZProcessSample sample;
  sample.t = t;
  sample.walk_steps = walk_steps;
  const double root = std::sqrt(static_cast<double>(walk_steps));
  const auto level = static_cast<std::int64_t>(std::ceil(t * root));
  if (level <= 0) return sample;

  std::mt19937_64 engine(derive_seed(seed, replica, 0x2A));
  if (mode == ZMode::kExcursion) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double escape = 1.0 / static_cast<double>(level);
    std::int64_t visits = 1;
    for (;;) {
      if (uniform(engine) < 0.5) {  // down-step: recurrence brings it back
        ++visits;
        continue;
      }
      if (level == 1 || uniform(engine) < escape) break;  // gambler's ruin
      ++visits;
    }
    sample.visits = visits;
  } else {
    const auto budget = static_cast<std::int64_t>(budget_factor * static_cast<double>(walk_steps));
    std::int64_t position = 0;
    std::int64_t maximum = 0;
    std::int64_t visits = 0;
    std::int64_t steps = 0;
    std::uint64_t bits = 0;
    int available = 0;
    while (maximum < level) {
      if (steps >= budget) {
        throw Error(ErrorCode::kHorizonExhausted,
                    "walk exhausted its step budget before the maximum reached t");
      }
      if (position == 0) ++visits;
      if (available == 0) {
        bits = engine();
        available = 64;
      }
      position += (bits & 1U) ? 1 : -1;
      bits >>= 1U;
      --available;
      ++steps;
      maximum = std::max(maximum, position);
    }
    sample.visits = visits;
    sample.steps_taken = steps;
  }
  sample.value = static_cast<double>(sample.visits) / (2.0 * root);
  return sample;
}

ZProcessResult run_zprocess(double t, std::int64_t walk_steps,
                            std::int64_t replicas, std::uint64_t seed,
                            int workers, ZMode mode) {
  require(replicas >= 2, ErrorCode::kInvalidArgument, "need at least two replicas");
  ZProcessResult result;
  result.t = t;
  result.samples.resize(static_cast<std::size_t>(replicas));
  parallel_for(result.samples.size(), workers, [&](std::size_t r) {
    result.samples[r] = simulate_z(t, walk_steps, seed, r, mode).value;
  });
  result.mean = stats::raw_moment(result.samples, 1);
  result.ks_distance = stats::ks_distance(
      result.samples, [t](double x) { return stats::exponential_cdf(x, t); });
  return result;
}

FddResult run_fdd(const functions::TestFunction& f,
                  const occupation::OccupationConfig& config,
                  const std::vector<Interval>& intervals, std::int64_t replicas,
                  std::uint64_t seed, int workers) {
  require(!intervals.empty(), ErrorCode::kInvalidArgument, "no intervals given");
  require(replicas >= kMinReplicas, ErrorCode::kInvalidArgument,
          "fdd runs need at least 100 replicas");
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [a, b] = intervals[i];
    require(a >= 0.0 && b > a, ErrorCode::kDomain, "intervals must satisfy 0 <= a < b");
    require(i == 0 || intervals[i - 1].second <= a, ErrorCode::kInvalidArgument,
            "intervals must be disjoint and ascending");
  }
  const auto constant = constants::c_fd(f);
  FddResult result;
  result.target = LimitTarget::make(constant.c_fd, 1.0);
  result.intervals = intervals;

  std::vector<double> points;
  for (const auto& [a, b] : intervals) {
    if (a > 0.0) points.push_back(a);
    points.push_back(b);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const auto index_of = [&points](double v) {
    return static_cast<std::size_t>(
        std::lower_bound(points.begin(), points.end(), v) - points.begin());
  };

  const occupation::Engine engine(f, config, points);
  const std::size_t horizons = points.size();
  const auto joint = draw(engine, replicas, seed, workers, horizons);

  const auto reps = static_cast<std::size_t>(replicas);
  const std::size_t m = intervals.size();
  result.increments.assign(m, std::vector<double>(reps));
  for (std::size_t i = 0; i < m; ++i) {
    const auto [a, b] = intervals[i];
    const std::size_t ib = index_of(b);
    for (std::size_t r = 0; r < reps; ++r) {
      const double upper = joint[r * horizons + ib];
      const double lower = a > 0.0 ? joint[r * horizons + index_of(a)] : 0.0;
      result.increments[i][r] = upper - lower;
    }
  }

  const double c = constant.c_fd;
  std::vector<std::vector<double>> standardized = result.increments;
  if (c > 0.0) {
    for (auto& row : standardized) {
      for (double& v : row) v /= c;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double len = intervals[i].second - intervals[i].first;
    const double scale = std::sqrt(len / 2.0);
    auto summary = summarize(
        standardized[i], [scale](double x) { return stats::laplace_cdf(x, scale); },
        derive_seed(seed, kBootstrapFamily, 2 + i));
    for (int k = 1; k <= kMaxOrder; ++k) {
      summary.target[k - 1] = target_moment_order(k, len, 1.0);
    }
    result.per_interval.push_back(summary);
  }
  result.covariance.assign(m, std::vector<stats::Estimate>(m));
  result.skew.assign(m, std::vector<stats::Estimate>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      result.covariance[i][j] = stats::covariance(result.increments[i], result.increments[j]);
      result.skew[i][j] = stats::cross_moment_21(standardized[i], standardized[j]);
    }
  }
  return result;
}

}  // namespace occulab::limitlab
