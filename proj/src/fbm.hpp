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

#ifndef OCCULAB_FBM_HPP
#define OCCULAB_FBM_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "rng.hpp"

namespace occulab::fbm {

/// Gaussian model being sampled: `dim` independent fBm coordinates with Hurst
/// index `hurst` on the grid {0, step, ..., n_steps * step}.
struct FbmSpec {
  double hurst = 0.5;
  int dim = 1;
  double step = 1.0;
  std::int64_t n_steps = 1;
  bool critical = false;  // when set, hurst * dim == 1 is enforced

  void validate() const;
};

struct FbmPath {
  FbmSpec spec;
  std::vector<double> times;   // n_steps + 1 entries
  std::vector<double> values;  // (n_steps + 1) x dim, row-major

  double at(std::size_t k, int coordinate) const {
    return values[k * static_cast<std::size_t>(spec.dim) + coordinate];
  }
};

/// E[B(s) B(t)] for one coordinate.
double covariance(double s, double t, double hurst);

/// Autocovariance of unit-spaced fractional Gaussian noise.
double fgn_autocovariance(std::int64_t lag, double hurst);

/// Davies-Harte style circulant embedding for `n` unit-step fGn increments.
/// Construction computes the embedding spectrum once; sample_pair() is then
/// const and safe to call concurrently.
class CirculantSampler {
 public:
  static constexpr double kNegativeTolerance = 1e-8;

  CirculantSampler(double hurst, std::int64_t n);
  ~CirculantSampler();
  CirculantSampler(const CirculantSampler&) = delete;
  CirculantSampler& operator=(const CirculantSampler&) = delete;

  std::int64_t size() const { return n_; }
  std::int64_t embedding_size() const { return m_; }
  double hurst() const { return hurst_; }

  /// Circulant eigenvalues after clamping of rounding-level negatives.
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  /// First row of the circulant actually sampled from, recovered from the
  /// clamped spectrum: entry k is the covariance at lag k the sampler uses.
  std::vector<double> embedded_covariance() const;

  /// One complex FFT yields two independent unit-step fGn sequences.
  void sample_pair(NormalStream& rng, std::span<double> first,
                   std::span<double> second) const;

 private:
  struct Plan;
  double hurst_;
  std::int64_t n_;
  std::int64_t m_;
  std::vector<double> eigenvalues_;
  std::vector<double> scale_;  // sqrt(lambda_k / m)
  std::unique_ptr<Plan> plan_;
};

/// Exact O(n^3) setup / O(n^2) per draw oracle.
class CholeskySampler {
 public:
  static constexpr std::int64_t kDefaultCap = 2048;
  static constexpr double kPivotFloor = 1e-12;

  CholeskySampler(double hurst, std::int64_t n, std::int64_t cap = kDefaultCap);

  std::int64_t size() const { return n_; }
  /// Row-major lower-triangular factor of the unit-step increment covariance.
  std::span<const double> factor() const { return factor_; }

  void sample(NormalStream& rng, std::span<double> out) const;

 private:
  std::int64_t n_;
  std::vector<double> factor_;
};

/// Streams: circulant draws coordinate pair p from stream p; Cholesky draws
/// coordinate c from stream c. `replica` selects the derived stream family.
FbmPath sample_circulant(const FbmSpec& spec, std::uint64_t seed,
                         std::uint64_t replica = 0);
FbmPath sample_cholesky(const FbmSpec& spec, std::uint64_t seed,
                        std::uint64_t replica = 0,
                        std::int64_t cap = CholeskySampler::kDefaultCap);

/// CSV with header t,x_1..x_d.
void write_csv(const FbmPath& path, std::ostream& out);

}  // namespace occulab::fbm

#endif  // OCCULAB_FBM_HPP
