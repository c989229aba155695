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

#ifndef OCCULAB_CHECKS_HPP
#define OCCULAB_CHECKS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace occulab::checks {

struct CheckReport {
  std::string check_name;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  // Smallest relative slack (bound - value) / |bound| seen; negative iff a
  // violation occurred.
  double worst_margin = 0.0;
  std::vector<std::pair<std::string, double>> parameters;

  double parameter(const std::string& key) const;
};

/// Covariance of two fBm increments on [t1,t2], [t3,t4] for H < 1/2 against
/// the two bounds of the increment-decorrelation lemma, on random
/// log-uniform configurations.
CheckReport check_cov_bounds(std::int64_t trials, std::uint64_t seed);

/// (1+u)^{2H} + (1+v)^{2H} - (1+u+v)^{2H} - 1, evaluated without cancellation.
double taylor_bracket(double u, double v, double hurst);

struct CovTrial {
  double expansion;  // proof's expansion, equals 2 |cov|
  double exact_cov;  // from the covariance function
  double bound_i;
  double bound_ii;
};
CovTrial evaluate_cov_trial(double t1, double t2, double t3, double t4, double hurst);

/// 0 <= bracket <= 2 H min(u, v) on a regular (u, v, H) grid.
CheckReport check_taylor_bound(int u_points = 200, int v_points = 200,
                               int h_points = 50);

/// Variance of sum x_i . (B(s_i) - B(s_{i-1})) against sum |x_i|^2 ds_i^{2H}:
/// ratio <= n_points (Cauchy-Schwarz) and min ratio > 0.
CheckReport check_lnd(int n_points, std::int64_t trials, std::uint64_t seed,
                      double hurst, int dim = 2);

/// Exact variance of sum x_i . increments, times s_0 = 0 < s_1 < ... .
double lnd_variance(const std::vector<double>& times,
                    const std::vector<std::vector<double>>& vectors, double hurst);

/// Gaussian integral lower bound at H d = 1 on a (u, v, |x2|) grid, d in {1,2}.
CheckReport check_lower_inequality(int u_points = 100, int v_points = 81,
                                   int x_points = 51);

/// log of int_{R^d} exp(-|x1|^2 u^{2H}/2 - v x1.x2) dx1 in closed form.
double lower_lhs_log(double u, double v, double x2_norm, int dim);

}  // namespace occulab::checks

#endif  // OCCULAB_CHECKS_HPP
