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


#include <cmath>
#include <numbers>
#include <vector>

#include "checks.hpp"
#include "doctest.h"
#include "error.hpp"
#include "fbm.hpp"

using namespace occulab;

TEST_SUITE("checks") {

TEST_CASE("covariance expansion at unit spacings") {
  const auto trial = checks::evaluate_cov_trial(1.0, 2.0, 3.0, 4.0, 0.25);
  const double expected = 2.0 * std::sqrt(2.0) - std::sqrt(3.0) - 1.0;
  CHECK(trial.expansion == doctest::Approx(expected).epsilon(1e-13));
  CHECK(trial.expansion == doctest::Approx(0.09637).epsilon(1e-4));
  CHECK(trial.expansion == doctest::Approx(2.0 * std::fabs(trial.exact_cov)).epsilon(1e-12));
  CHECK(trial.bound_i == doctest::Approx(0.5));
  CHECK(trial.bound_ii == doctest::Approx(2.0));
  CHECK(trial.expansion <= trial.bound_i);
  CHECK(trial.expansion <= trial.bound_ii);
}

TEST_CASE("covariance of disjoint increments from the covariance function") {
  const double h = 0.3;
  const auto trial = checks::evaluate_cov_trial(0.5, 1.7, 2.0, 5.0, h);
  const double direct = fbm::covariance(1.7, 5.0, h) - fbm::covariance(1.7, 2.0, h) -
                        fbm::covariance(0.5, 5.0, h) + fbm::covariance(0.5, 2.0, h);
  CHECK(trial.exact_cov == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("degenerate first interval") {
  const auto trial = checks::evaluate_cov_trial(1.0, 1.0 + 1e-12, 2.0, 3.0, 0.25);
  CHECK(trial.expansion < 1e-10);
  CHECK(trial.bound_i < 1e-6);
  CHECK(trial.expansion <= trial.bound_i);
}

TEST_CASE("taylor bracket") {
  CHECK(checks::taylor_bracket(1.0, 1.0, 0.25) ==
        doctest::Approx(std::pow(2.0, 1.5) - std::sqrt(3.0) - 1.0).epsilon(1e-13));
  CHECK(checks::taylor_bracket(0.0, 3.0, 0.25) == 0.0);
  CHECK(checks::taylor_bracket(1e-9, 1.0, 0.25) >= 0.0);
  CHECK(checks::taylor_bracket(1e-9, 1.0, 0.25) < 1e-9);
}

TEST_CASE("local nondeterminism variance") {
  const double h = 1.0 / 3.0;
  const std::vector<double> one{0.5, 2.0};
  const std::vector<std::vector<double>> x{{3.0, 4.0}};
  CHECK(checks::lnd_variance(one, x, h) == doctest::Approx(25.0 * std::pow(1.5, 2.0 * h)));
  const std::vector<double> times{0.0, 1.0, 3.0, 3.5};
  const std::vector<std::vector<double>> v{{1.0, 0.0}, {0.5, 2.0}, {-1.0, 1.0}};
  const double brownian = 1.0 * 1.0 + 4.25 * 2.0 + 2.0 * 0.5;
  CHECK(checks::lnd_variance(times, v, 0.5) == doctest::Approx(brownian).epsilon(1e-13));
  CHECK_THROWS_AS(checks::lnd_variance(times, x, h), Error);
}

TEST_CASE("lower inequality log form") {
  for (int dim : {1, 2}) {
    const double lhs = checks::lower_lhs_log(2.5, 0.0, 1.0, dim);
    CHECK(lhs == doctest::Approx(0.5 * dim * std::log(2.0 * std::numbers::pi) - std::log(2.5)));
    CHECK(checks::lower_lhs_log(2.5, 0.3, 1.0, dim) > lhs);
  }
}

TEST_CASE("small sweeps report no violations") {
  const auto cov = checks::check_cov_bounds(20000, 7);
  CHECK(cov.check_name == "cov");
  CHECK(cov.trials == 20000);
  CHECK(cov.violations == 0);
  CHECK(cov.worst_margin >= 0.0);

  const auto taylor = checks::check_taylor_bound(40, 40, 10);
  CHECK(taylor.violations == 0);

  const auto lnd = checks::check_lnd(3, 10000, 3, 1.0 / 3.0);
  CHECK(lnd.violations == 0);
  CHECK(lnd.parameter("min_ratio") > 0.0);
  CHECK(lnd.parameter("max_ratio") <= 3.0);
  CHECK_THROWS_AS(lnd.parameter("missing"), Error);

  const auto single = checks::check_lnd(1, 1000, 3, 0.3);
  CHECK(single.parameter("min_ratio") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(single.parameter("max_ratio") == doctest::Approx(1.0).epsilon(1e-12));
  const auto brownian = checks::check_lnd(4, 1000, 3, 0.5);
  CHECK(brownian.parameter("max_ratio") <= 1.0 + 1e-12);

  const auto lower = checks::check_lower_inequality(20, 21, 11);
  CHECK(lower.violations == 0);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(checks::check_lnd(5, 10, 1, 0.5), Error);
  CHECK_THROWS_AS(checks::check_lnd(0, 10, 1, 0.5), Error);
}

}  // TEST_SUITE
