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
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "functions.hpp"
#include "limitlab.hpp"
#include "test_util.hpp"

using namespace occulab;
using functions::TestFunction;
using occulab::testing::mean_of;
using occulab::testing::z_score;

TEST_SUITE("limitlab") {

TEST_CASE("target moments") {
  CHECK(limitlab::target_moment(1, 1.0, 1.0) == 1.0);
  CHECK(limitlab::target_moment(2, 3.0, 1.0) == doctest::Approx(54.0));
  CHECK(limitlab::target_moment(2, 1.0, 2.0) == doctest::Approx(6.0 * 16.0));
  for (int m = 1; m < 6; ++m) {
    const double t = 1.7;
    const double ratio = limitlab::target_moment(m + 1, t, 1.0) / limitlab::target_moment(m, t, 1.0);
    CHECK(ratio == doctest::Approx((2.0 * m + 1.0) * (2.0 * m + 2.0) * t / 2.0));
  }
  CHECK(limitlab::target_moment_order(1, 2.0, 1.0) == 0.0);
  CHECK(limitlab::target_moment_order(3, 2.0, 1.0) == 0.0);
  CHECK(limitlab::target_moment_order(4, 2.0, 1.0) == limitlab::target_moment(2, 2.0, 1.0));
  CHECK_THROWS_AS(limitlab::target_moment(0, 1.0, 1.0), Error);
}

TEST_CASE("laplace scale") {
  const auto target = limitlab::LimitTarget::make(2.0, 8.0);
  CHECK(target.laplace_scale == doctest::Approx(4.0));
  // Laplace(b) has variance 2 b^2 = C^2 t.
  CHECK(2.0 * target.laplace_scale * target.laplace_scale == doctest::Approx(32.0));
}

TEST_CASE("Z in excursion mode is exponential with mean t") {
  const auto z = limitlab::run_zprocess(1.0, 1000000, 3000, 3);
  CHECK(z.samples.size() == 3000);
  CHECK(z_score(z.mean, 1.0) < 4.0);
  CHECK(z.ks_distance < 0.04);
  CHECK(limitlab::simulate_z(0.0, 10000, 1).value == 0.0);
}

TEST_CASE("Z walk mode agrees with excursion mode") {
  const std::int64_t n = 10000;
  std::vector<double> walk, exc;
  int exhausted = 0;
  for (int r = 0; r < 600; ++r) {
    try {
      const auto w = limitlab::simulate_z(0.5, n, 9, r, limitlab::ZMode::kWalk, 1000.0);
      walk.push_back(w.value);
      CHECK(w.steps_taken > 0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kHorizonExhausted);
      ++exhausted;
    }
    exc.push_back(limitlab::simulate_z(0.5, n, 9, r).value);
  }
  CHECK(exhausted < 60);
  // Exhausted runs are the long ones; a truncated walk sample biases low, so
  // compare only at a coarse level.
  CHECK(mean_of(walk).value == doctest::Approx(0.5).epsilon(0.15));
  CHECK(z_score(mean_of(exc), 0.5) < 4.0);
}

TEST_CASE("Z walk mode honours its budget") {
  CHECK_THROWS_AS(limitlab::simulate_z(2.0, 10000, 1, 0, limitlab::ZMode::kWalk, 1e-3), Error);
  CHECK_THROWS_AS(limitlab::simulate_z(1.0, 100, 1), Error);
}

TEST_CASE("Z values lie on the local-time lattice") {
  const std::int64_t n = 10000;
  for (int r = 0; r < 20; ++r) {
    const auto s = limitlab::simulate_z(1.0, n, 4, r);
    CHECK(s.value * 2.0 * std::sqrt(static_cast<double>(n)) == doctest::Approx(s.visits));
    CHECK(s.visits >= 1);
  }
}

TEST_CASE("second-order runs") {
  occupation::OccupationConfig c;
  c.n = 4.0;
  const auto f = TestFunction::gaussian_difference(2, 2.0);
  const auto a = limitlab::run_second_order(f, c, 200, 5, 1);
  const auto b = limitlab::run_second_order(f, c, 200, 5, 3);
  CHECK(a.samples == b.samples);
  CHECK(a.summary.replicas == 200);
  CHECK(a.summary.target[1] == 1.0);
  CHECK(a.summary.target[3] == 6.0);
  CHECK(a.target.c_fd == doctest::Approx(std::sqrt(4.0 * std::log(1.25))));
  CHECK_THROWS_AS(limitlab::run_second_order(f, c, 50, 5), Error);

  const auto zero = limitlab::run_second_order(TestFunction::zero(2), c, 100, 5);
  for (double v : zero.samples) CHECK(v == 0.0);
}

TEST_CASE("first-order runs") {
  occupation::OccupationConfig c;
  c.n = 5.0;
  const auto g = TestFunction::plain_gaussian(2);
  const auto r = limitlab::run_first_order(g, c, 300, 2);
  CHECK(r.target_mean == doctest::Approx(1.0));
  CHECK(r.summary.target[0] == doctest::Approx(1.0));
  CHECK(r.summary.target[1] == doctest::Approx(2.0));
  for (double v : r.samples) CHECK(v >= 0.0);
  CHECK_THROWS_AS(limitlab::run_first_order(TestFunction::gaussian_difference(2, 2.0), c, 300, 2),
                  Error);
}

TEST_CASE("fdd runs") {
  occupation::OccupationConfig c;
  c.n = 4.0;
  const auto f = TestFunction::gaussian_difference(2, 2.0);
  const std::vector<limitlab::Interval> iv{{0.0, 1.0}, {1.0, 2.0}};
  const auto r = limitlab::run_fdd(f, c, iv, 200, 3);
  REQUIRE(r.increments.size() == 2);
  CHECK(r.increments[0].size() == 200);
  CHECK(r.covariance[0][1].value == doctest::Approx(r.covariance[1][0].value));
  CHECK(r.per_interval[1].target[1] == doctest::Approx(1.0));
  const std::vector<limitlab::Interval> overlapping{{0.0, 1.5}, {1.0, 2.0}};
  CHECK_THROWS_AS(limitlab::run_fdd(f, c, overlapping, 200, 3), Error);

  const auto zero = limitlab::run_fdd(TestFunction::zero(2), c, iv, 100, 3);
  for (const auto& inc : zero.increments)
    for (double v : inc) CHECK(v == 0.0);
}

}  // TEST_SUITE
