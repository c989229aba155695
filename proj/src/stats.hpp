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

#ifndef OCCULAB_STATS_HPP
#define OCCULAB_STATS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace occulab::stats {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Mean of x^order with its standard error (the delete-one jackknife SE of a
/// sample mean is exactly sd / sqrt(n)).
Estimate raw_moment(std::span<const double> x, int order);

/// Unbiased variance with delete-one jackknife SE.
Estimate variance(std::span<const double> x);

/// Excess kurtosis m4 / m2^2 - 3 (central moments) with jackknife SE.
Estimate excess_kurtosis(std::span<const double> x);

/// Sample covariance of paired data with jackknife SE.
Estimate covariance(std::span<const double> x, std::span<const double> y);

/// mean(x^2 y) with SE.
Estimate cross_moment_21(std::span<const double> x, std::span<const double> y);

using Cdf = std::function<double(double)>;

/// sup_x |F_n(x) - F(x)| for a continuous target F.
double ks_distance(std::span<const double> x, const Cdf& cdf);

/// Bootstrap SE of the KS distance (deterministic given seed).
double ks_bootstrap_se(std::span<const double> x, const Cdf& cdf,
                       std::uint64_t seed, int resamples = 200);

double laplace_cdf(double x, double scale);
/// Exponential with the given mean; mean == 0 is the point mass at 0.
double exponential_cdf(double x, double mean);

}  // namespace occulab::stats

#endif  // OCCULAB_STATS_HPP
