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

#ifndef OCCULAB_LIMITLAB_HPP
#define OCCULAB_LIMITLAB_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "functions.hpp"
#include "occupation.hpp"
#include "stats.hpp"

namespace occulab::limitlab {

inline constexpr int kMaxOrder = 6;

/// Law of C sqrt(Z(t)) eta: Laplace with scale C sqrt(t/2).
struct LimitTarget {
  double c_fd = 0.0;
  double t = 0.0;
  double laplace_scale = 0.0;

  static LimitTarget make(double c_fd, double t);
};

struct MomentSummary {
  std::array<double, kMaxOrder> estimate{};
  std::array<double, kMaxOrder> se{};
  std::array<double, kMaxOrder> target{};
  stats::Estimate mean;
  stats::Estimate variance;
  stats::Estimate kurtosis;  // excess
  double ks_distance = 0.0;
  double ks_se = 0.0;
  std::int64_t replicas = 0;
};

/// E[(c sqrt(Z(t)) eta)^{2m}] = c^{2m} (2m)! t^m / 2^m.
double target_moment(int m, double t, double c);
/// Same, indexed by the order of the moment; odd orders vanish.
double target_moment_order(int order, double t, double c);

struct SecondOrderResult {
  LimitTarget target;
  MomentSummary summary;      // of F / C (raw F when C == 0)
  std::vector<double> samples;  // raw F_n(t)
};

SecondOrderResult run_second_order(const functions::TestFunction& f,
                                   const occupation::OccupationConfig& config,
                                   std::int64_t replicas, std::uint64_t seed,
                                   int workers = 1);

struct FirstOrderResult {
  double target_mean = 0.0;  // t (2 pi)^{-d/2} int f
  MomentSummary summary;     // of n^{-1} int f(B), targets are Exp moments
  std::vector<double> samples;
};

FirstOrderResult run_first_order(const functions::TestFunction& f,
                                 const occupation::OccupationConfig& config,
                                 std::int64_t replicas, std::uint64_t seed,
                                 int workers = 1);

enum class ZMode {
  kExcursion,  // excursion-by-excursion walk, no step budget
  kWalk,       // literal step-by-step walk with a step budget
};

struct ZProcessSample {
  double t = 0.0;
  double value = 0.0;  // local time at 0 when the running max first hits t
  std::int64_t walk_steps = 0;
  std::int64_t visits = 0;
  std::int64_t steps_taken = 0;  // kWalk only
};

inline constexpr std::int64_t kMinWalkSteps = 10000;

/// ell(M^{-1}(t)) from a +-1 walk with spatial scale sqrt(walk_steps).
/// kWalk throws kHorizonExhausted after budget_factor * walk_steps steps.
ZProcessSample simulate_z(double t, std::int64_t walk_steps, std::uint64_t seed,
                          std::uint64_t replica = 0, ZMode mode = ZMode::kExcursion,
                          double budget_factor = 100.0);

struct ZProcessResult {
  double t = 0.0;
  stats::Estimate mean;
  double ks_distance = 0.0;  // vs Exp(mean t)
  std::vector<double> samples;
};

ZProcessResult run_zprocess(double t, std::int64_t walk_steps,
                            std::int64_t replicas, std::uint64_t seed,
                            int workers = 1, ZMode mode = ZMode::kExcursion);

using Interval = std::pair<double, double>;  // (a, b]

struct FddResult {
  LimitTarget target;  // at t = 1 (scale per unit of Z-time)
  std::vector<Interval> intervals;
  std::vector<MomentSummary> per_interval;  // of (F(b) - F(a)) / C, target t = b - a
  std::vector<std::vector<stats::Estimate>> covariance;  // raw increments
  std::vector<std::vector<stats::Estimate>> skew;        // E[X_i^2 X_j], standardized
  std::vector<std::vector<double>> increments;            // [interval][replica]
};

FddResult run_fdd(const functions::TestFunction& f,
                  const occupation::OccupationConfig& config,
                  const std::vector<Interval>& intervals, std::int64_t replicas,
                  std::uint64_t seed, int workers = 1);

/// Moments 1..6, variance, kurtosis, KS against `cdf`; targets left at zero.
MomentSummary summarize(std::span<const double> values, const stats::Cdf& cdf,
                        std::uint64_t seed);

}  // namespace occulab::limitlab

#endif  // OCCULAB_LIMITLAB_HPP
