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

#include "occupation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "summation.hpp"

namespace occulab::occupation {
namespace {

double squared_norm(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return r2;
}

void validate_t_list(std::span<const double> t_list) {
  require(!t_list.empty(), ErrorCode::kInvalidArgument, "t_list is empty");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    require(std::isfinite(t_list[i]) && t_list[i] > 0.0, ErrorCode::kDomain,
            "horizon exponents must be positive");
    require(i == 0 || t_list[i] > t_list[i - 1], ErrorCode::kInvalidArgument,
            "t_list must be strictly ascending");
  }
}

}  // namespace

void OccupationConfig::validate() const {
  require(std::isfinite(n) && n > 0.0, ErrorCode::kDomain, "n must be positive");
  require(std::isfinite(t) && t > 0.0, ErrorCode::kDomain, "t must be positive");
  require(std::isfinite(spacing) && spacing > 0.0, ErrorCode::kDomain,
          "spacing must be positive");
  require(grid_cap >= 1, ErrorCode::kInvalidArgument, "grid cap must be positive");
  require(skip_probability >= 0.0 && skip_probability < 1.0,
          ErrorCode::kInvalidArgument, "skip probability must lie in [0,1)");
}

GridPlan plan_grid(const OccupationConfig& config, double t_max) {
  config.validate();
  GridPlan plan;
  plan.horizon = std::exp(config.n * t_max);
  const double cells = std::ceil(plan.horizon / config.spacing);
  require(std::isfinite(cells) && cells < 9.0e18, ErrorCode::kGridTooLarge,
          "horizon e^{n t} is too large to grid");
  plan.points = std::max<std::int64_t>(1, static_cast<std::int64_t>(cells));
  plan.step = plan.horizon / static_cast<double>(plan.points);
  return plan;
}

std::int64_t terms_for(const OccupationConfig& config, const GridPlan& plan,
                       double t) {
  const double cells = std::exp(config.n * t) / plan.step;
  const double guarded = cells * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
  const auto k = static_cast<std::int64_t>(std::ceil(guarded));
  return std::clamp<std::int64_t>(k, 1, plan.points);
}

Engine::Engine(functions::TestFunction f, OccupationConfig config,
               std::vector<double> t_list)
    : f_(std::move(f)), config_(config), t_list_(std::move(t_list)) {
  config_.validate();
  validate_t_list(t_list_);
  hurst_ = 1.0 / static_cast<double>(f_.dim());
  require(f_.dim() >= 2, ErrorCode::kDomain,
          "the critical index H = 1/d lies in (0,1) only for d >= 2");
  plan_ = plan_grid(config_, t_list_.back());
  terms_.reserve(t_list_.size());
  for (double t : t_list_) terms_.push_back(terms_for(config_, plan_, t));

  markov_ = f_.dim() == 2;
  if (!markov_) {
    require(plan_.points <= config_.grid_cap, ErrorCode::kGridTooLarge,
            "grid needs " + std::to_string(plan_.points) + " points, cap is " +
                std::to_string(config_.grid_cap));
    sampler_ = std::make_shared<fbm::CirculantSampler>(
        hurst_, std::max<std::int64_t>(1, plan_.points - 1));
  }
}

std::vector<double> Engine::realize(std::uint64_t seed, std::uint64_t replica) const {
  return markov_ ? realize_markov(seed, replica) : realize_circulant(seed, replica);
}

std::vector<double> Engine::realize_circulant(std::uint64_t seed,
                                              std::uint64_t replica) const {
  const int dim = f_.dim();
  const auto n_inc = static_cast<std::size_t>(sampler_->size());
  std::vector<std::vector<double>> increments(static_cast<std::size_t>(dim),
                                              std::vector<double>(n_inc));
  std::vector<double> spare(n_inc);
  for (int c = 0; c < dim; c += 2) {
    NormalStream rng(seed, replica, static_cast<std::uint64_t>(c / 2));
    auto& second = c + 1 < dim ? increments[c + 1] : spare;
    sampler_->sample_pair(rng, increments[c], second);
  }

  const double scale = std::pow(plan_.step, hurst_);
  const double radius2 = std::pow(f_.support_radius(), 2);
  std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
  std::vector<double> out;
  out.reserve(terms_.size());
  CompensatedSum sum;
  std::size_t next = 0;
  for (std::int64_t k = 0; k < plan_.points; ++k) {
    if (k > 0) {
      for (int c = 0; c < dim; ++c) x[c] += scale * increments[c][k - 1];
    }
    const double r2 = squared_norm(x);
    if (r2 <= radius2) sum += f_.eval_radial_squared(r2);
    while (next < terms_.size() && terms_[next] == k + 1) {
      out.push_back(plan_.step * sum.value() / std::sqrt(config_.n));
      ++next;
    }
  }
  return out;
}

// Exact Gaussian random walk on the grid (H = 1/2). Far from supp f the walk
// proposes a block endpoint and skips the interior when the continuous
// Brownian bridge between the endpoints crosses into the slab
// {u.x <= R}, u = x0/|x0|, with probability below skip_probability; otherwise
// the block is bisected with exact bridge midpoints down to single steps.
std::vector<double> Engine::realize_markov(std::uint64_t seed,
                                           std::uint64_t replica) const {
  const int dim = f_.dim();
  const auto d = static_cast<std::size_t>(dim);
  const double h = plan_.step;
  const double radius = f_.support_radius();
  const double radius2 = radius * radius;
  const bool skip = config_.far_field_skip && config_.skip_probability > 0.0 &&
                    std::isfinite(radius);
  const double log_inv_p = skip ? -std::log(config_.skip_probability) : 0.0;

  NormalStream rng(seed, replica, 0);
  std::vector<CompensatedSum> segment(terms_.size());
  std::size_t seg = 0;

  auto contribute = [&](std::span<const double> x, CompensatedSum& acc) {
    const double r2 = squared_norm(x);
    if (r2 <= radius2) acc += f_.eval_radial_squared(r2);
  };

  auto can_skip = [&](std::span<const double> x0, std::span<const double> x1,
                      double tau) {
    if (!skip) return false;
    const double r0 = std::sqrt(squared_norm(x0));
    if (r0 <= radius) return false;
    double proj = 0.0;
    for (std::size_t c = 0; c < d; ++c) proj += x0[c] * x1[c];
    const double a = r0 - radius;
    const double b = proj / r0 - radius;
    if (b <= 0.0) return false;
    return 2.0 * a * b / tau > log_inv_p;
  };

  // Interior points strictly between k0 and k1; both endpoints are known.
  auto resolve = [&](auto&& self, std::int64_t k0, std::span<const double> x0,
                     std::int64_t k1, std::span<const double> x1,
                     CompensatedSum& acc) -> void {
    const std::int64_t len = k1 - k0;
    if (len <= 1) return;
    if (can_skip(x0, x1, static_cast<double>(len) * h)) return;
    const std::int64_t km = k0 + len / 2;
    const double w = static_cast<double>(km - k0) / static_cast<double>(len);
    const double sd = std::sqrt(h * static_cast<double>(km - k0) *
                                static_cast<double>(k1 - km) / static_cast<double>(len));
    std::vector<double> xm(d);
    for (std::size_t c = 0; c < d; ++c) {
      xm[c] = x0[c] + w * (x1[c] - x0[c]) + sd * rng();
    }
    contribute(xm, acc);
    self(self, k0, x0, km, xm, acc);
    self(self, km, xm, k1, x1, acc);
  };

  std::vector<double> x(d, 0.0);
  std::vector<double> y(d, 0.0);
  std::int64_t k = 0;
  const std::int64_t total = plan_.points;
  while (k < total) {
    while (seg < terms_.size() && k >= terms_[seg]) ++seg;
    contribute(x, segment[seg]);
    if (k + 1 >= total) break;

    std::int64_t len = 1;
    if (skip) {
      const double gap = std::sqrt(squared_norm(x)) - radius;
      if (gap > 0.0) {
        const double steps = gap * gap / (h * log_inv_p);
        if (steps >= 2.0) {
          len = static_cast<std::int64_t>(std::min(steps, 9.0e18));
        }
      }
    }
    len = std::min(len, terms_[seg] - k);
    len = std::max<std::int64_t>(len, 1);

    const double sd = std::sqrt(h * static_cast<double>(len));
    for (std::size_t c = 0; c < d; ++c) y[c] = x[c] + sd * rng();
    resolve(resolve, k, x, k + len, y, segment[seg]);
    k += len;
    std::swap(x, y);
  }

  std::vector<double> out;
  out.reserve(terms_.size());
  const double norm = h / std::sqrt(config_.n);
  double running = 0.0;
  for (const auto& s : segment) {
    running += s.value();
    out.push_back(norm * running);
  }
  return out;
}

OccupationSample realize(const functions::TestFunction& f,
                         const OccupationConfig& config, std::uint64_t seed,
                         std::uint64_t replica) {
  const Engine engine(f, config, {config.t});
  return {engine.realize(seed, replica).front(), seed, replica, config};
}

std::vector<OccupationSample> realize_multi(const functions::TestFunction& f,
                                            const OccupationConfig& config,
                                            std::span<const double> t_list,
                                            std::uint64_t seed,
                                            std::uint64_t replica) {
  const Engine engine(f, config, {t_list.begin(), t_list.end()});
  const auto values = engine.realize(seed, replica);
  std::vector<OccupationSample> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    OccupationConfig echo = config;
    echo.t = t_list[i];
    out.push_back({values[i], seed, replica, echo});
  }
  return out;
}

double realize_rescaled(const functions::TestFunction& f,
                        const OccupationConfig& config, std::uint64_t seed,
                        std::uint64_t replica) {
  const GridPlan plan = plan_grid(config, config.t);
  const int dim = f.dim();
  const double hurst = 1.0 / static_cast<double>(dim);
  const std::int64_t m = plan.points;
  const fbm::CholeskySampler sampler(hurst, std::max<std::int64_t>(1, m - 1));
  std::vector<std::vector<double>> unit(static_cast<std::size_t>(dim),
                                        std::vector<double>(static_cast<std::size_t>(sampler.size())));
  for (int c = 0; c < dim; ++c) {
    NormalStream rng(seed, replica, static_cast<std::uint64_t>(c));
    sampler.sample(rng, unit[c]);
  }
  // Standard fBm on [0,1] at k/M, then B(T s) = T^H B(s).
  const double inner = std::pow(1.0 / static_cast<double>(m), hurst);
  const double outer = std::pow(plan.horizon, hurst);
  std::vector<double> level(static_cast<std::size_t>(dim), 0.0);
  std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
  CompensatedSum sum;
  for (std::int64_t k = 0; k < m; ++k) {
    if (k > 0) {
      for (int c = 0; c < dim; ++c) level[c] += inner * unit[c][k - 1];
    }
    for (int c = 0; c < dim; ++c) x[c] = outer * level[c];
    sum += f.eval(x);
  }
  return plan.horizon / std::sqrt(config.n) * sum.value() / static_cast<double>(m);
}

}  // namespace occulab::occupation
