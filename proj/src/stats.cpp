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

#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "error.hpp"
#include "rng.hpp"
#include "summation.hpp"

namespace occulab::stats {
namespace {

double power(double x, int order) {
  double p = 1.0;
  for (int i = 0; i < order; ++i) p *= x;
  return p;
}

// Delete-one jackknife SE from the leave-one-out replicates.
double jackknife_se(std::span<const double> replicates) {
  const auto n = static_cast<double>(replicates.size());
  if (replicates.size() < 2) return 0.0;
  CompensatedSum s;
  for (double r : replicates) s += r;
  const double mean = s.value() / n;
  CompensatedSum ss;
  for (double r : replicates) ss += (r - mean) * (r - mean);
  return std::sqrt((n - 1.0) / n * ss.value());
}

struct PowerSums {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
};

PowerSums power_sums(std::span<const double> x) {
  CompensatedSum a, b, c, d;
  for (double v : x) {
    const double v2 = v * v;
    a += v;
    b += v2;
    c += v2 * v;
    d += v2 * v2;
  }
  return {a.value(), b.value(), c.value(), d.value()};
}

double central_var(const PowerSums& p, double n) {
  const double mean = p.s1 / n;
  return p.s2 / n - mean * mean;
}

double kurtosis_from(const PowerSums& p, double n) {
  const double mean = p.s1 / n;
  const double m2 = p.s2 / n - mean * mean;
  const double m4 = p.s4 / n - 4.0 * mean * p.s3 / n + 6.0 * mean * mean * p.s2 / n -
                    3.0 * mean * mean * mean * mean;
  if (m2 <= 0.0) return 0.0;
  return m4 / (m2 * m2) - 3.0;
}

}  // namespace

Estimate raw_moment(std::span<const double> x, int order) {
  require(!x.empty(), ErrorCode::kInvalidArgument, "empty sample");
  const auto n = static_cast<double>(x.size());
  CompensatedSum s;
  for (double v : x) s += power(v, order);
  const double mean = s.value() / n;
  if (x.size() < 2) return {mean, 0.0};
  CompensatedSum ss;
  for (double v : x) {
    const double dv = power(v, order) - mean;
    ss += dv * dv;
  }
  return {mean, std::sqrt(ss.value() / (n - 1.0) / n)};
}

Estimate variance(std::span<const double> x) {
  require(x.size() >= 2, ErrorCode::kInvalidArgument, "need two samples");
  const auto n = static_cast<double>(x.size());
  const PowerSums p = power_sums(x);
  const double value = central_var(p, n) * n / (n - 1.0);
  std::vector<double> loo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    const PowerSums q{p.s1 - v, p.s2 - v * v, 0.0, 0.0};
    loo[i] = central_var(q, n - 1.0) * (n - 1.0) / (n - 2.0);
  }
  return {value, jackknife_se(loo)};
}

Estimate excess_kurtosis(std::span<const double> x) {
  require(x.size() >= 3, ErrorCode::kInvalidArgument, "need three samples");
  const auto n = static_cast<double>(x.size());
  const PowerSums p = power_sums(x);
  std::vector<double> loo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    const double v2 = v * v;
    const PowerSums q{p.s1 - v, p.s2 - v2, p.s3 - v2 * v, p.s4 - v2 * v2};
    loo[i] = kurtosis_from(q, n - 1.0);
  }
  return {kurtosis_from(p, n), jackknife_se(loo)};
}

Estimate covariance(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 3, ErrorCode::kInvalidArgument,
          "paired samples of equal length >= 3 required");
  const auto n = static_cast<double>(x.size());
  CompensatedSum sx, sy, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
  }
  auto cov = [](double ax, double ay, double axy, double m) {
    return (axy - ax * ay / m) / (m - 1.0);
  };
  const double value = cov(sx.value(), sy.value(), sxy.value(), n);
  std::vector<double> loo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    loo[i] = cov(sx.value() - x[i], sy.value() - y[i], sxy.value() - x[i] * y[i], n - 1.0);
  }
  return {value, jackknife_se(loo)};
}

Estimate cross_moment_21(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && !x.empty(), ErrorCode::kInvalidArgument,
          "paired samples of equal length required");
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = x[i] * x[i] * y[i];
  return raw_moment(prod, 1);
}

double ks_distance(std::span<const double> x, const Cdf& cdf) {
  require(!x.empty(), ErrorCode::kInvalidArgument, "empty sample");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Ties: the empirical CDF jumps once over the whole run.
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    // Left limit for the gap below the jump, so atoms in the target match.
    const double f_left = cdf(std::nextafter(sorted[i], -std::numeric_limits<double>::infinity()));
    const double f = cdf(sorted[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j + 1) / n;
    worst = std::max({worst, std::fabs(f_left - below), std::fabs(above - f)});
    i = j + 1;
  }
  return worst;
}

double ks_bootstrap_se(std::span<const double> x, const Cdf& cdf,
                       std::uint64_t seed, int resamples) {
  require(!x.empty() && resamples >= 2, ErrorCode::kInvalidArgument,
          "bootstrap needs data and at least two resamples");
  std::mt19937_64 engine(derive_seed(seed, 0xB007, 0));
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  std::vector<double> resample(x.size());
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    for (double& v : resample) v = x[pick(engine)];
    values.push_back(ks_distance(resample, cdf));
  }
  CompensatedSum s;
  for (double v : values) s += v;
  const double mean = s.value() / resamples;
  CompensatedSum ss;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss.value() / (resamples - 1));
}

double laplace_cdf(double x, double scale) {
  if (scale <= 0.0) return x < 0.0 ? 0.0 : 1.0;
  return x < 0.0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

double exponential_cdf(double x, double mean) {
  if (x < 0.0) return 0.0;
  if (mean <= 0.0) return 1.0;
  return -std::expm1(-x / mean);
}

}  // namespace occulab::stats
