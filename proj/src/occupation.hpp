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

#ifndef OCCULAB_OCCUPATION_HPP
#define OCCULAB_OCCUPATION_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fbm.hpp"
#include "functions.hpp"

namespace occulab::occupation {

struct OccupationConfig {
  double n = 8.0;        // scale parameter: horizon is e^{n t}, normaliser sqrt(n)
  double t = 1.0;        // horizon exponent
  double spacing = 0.5;  // requested grid step; the effective step tiles [0, T)
  std::int64_t grid_cap = std::int64_t{1} << 26;
  // Markov (H = 1/2) fast path: jump over blocks that cannot reach supp f.
  bool far_field_skip = true;
  double skip_probability = 1e-14;

  void validate() const;
};

struct GridPlan {
  double horizon = 0.0;     // T = e^{n t_max}
  std::int64_t points = 0;  // N: grid points 0, h, ..., (N-1) h
  double step = 0.0;        // h = T / N
};

GridPlan plan_grid(const OccupationConfig& config, double t_max);

/// Number of left-endpoint terms that belong to horizon e^{n t}.
std::int64_t terms_for(const OccupationConfig& config, const GridPlan& plan, double t);

struct OccupationSample {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  OccupationConfig config;
};

/// Draws F_n(t) = n^{-1/2} h sum_{k<N} f(B(k h)) with B a dim-dimensional fBm
/// at the critical index H = 1/dim. Reusable across replicas: the circulant
/// spectrum is built once per engine. Thread-safe.
class Engine {
 public:
  Engine(functions::TestFunction f, OccupationConfig config,
         std::vector<double> t_list);

  const GridPlan& plan() const { return plan_; }
  double hurst() const { return hurst_; }
  std::span<const double> t_list() const { return t_list_; }
  bool markov() const { return markov_; }

  /// F_n(t_i) for every t in t_list, from one path.
  std::vector<double> realize(std::uint64_t seed, std::uint64_t replica) const;

 private:
  std::vector<double> realize_markov(std::uint64_t seed, std::uint64_t replica) const;
  std::vector<double> realize_circulant(std::uint64_t seed, std::uint64_t replica) const;

  functions::TestFunction f_;
  OccupationConfig config_;
  std::vector<double> t_list_;
  std::vector<std::int64_t> terms_;
  GridPlan plan_;
  double hurst_;
  bool markov_;
  std::shared_ptr<const fbm::CirculantSampler> sampler_;
};

OccupationSample realize(const functions::TestFunction& f,
                         const OccupationConfig& config, std::uint64_t seed,
                         std::uint64_t replica = 0);

std::vector<OccupationSample> realize_multi(const functions::TestFunction& f,
                                            const OccupationConfig& config,
                                            std::span<const double> t_list,
                                            std::uint64_t seed,
                                            std::uint64_t replica = 0);

/// Same functional through B(T s) =_d T^H B(s): standard fBm on [0,1] with
/// M = N points drawn by the Cholesky oracle, then scaled. Used only to cross
/// check the direct route; limited to Cholesky-sized grids.
double realize_rescaled(const functions::TestFunction& f,
                        const OccupationConfig& config, std::uint64_t seed,
                        std::uint64_t replica = 0);

}  // namespace occulab::occupation

#endif  // OCCULAB_OCCUPATION_HPP
