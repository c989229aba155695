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

#include "fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <string>

#include "error.hpp"

namespace occulab::fbm {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::int64_t n)
      : data(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

void check_hurst(double hurst) {
  require(std::isfinite(hurst) && hurst > 0.0 && hurst < 1.0,
          ErrorCode::kDomain, "hurst index must lie in (0,1)");
}

}  // namespace

void FbmSpec::validate() const {
  check_hurst(hurst);
  require(dim >= 1, ErrorCode::kDomain, "dimension must be positive");
  require(std::isfinite(step) && step > 0.0, ErrorCode::kDomain,
          "step must be positive");
  require(n_steps >= 1, ErrorCode::kDomain, "n_steps must be at least 1");
  if (critical) {
    require(std::fabs(hurst * dim - 1.0) < 1e-12, ErrorCode::kInvalidArgument,
            "critical spec requires hurst * dim == 1");
  }
}

double covariance(double s, double t, double hurst) {
  check_hurst(hurst);
  require(s >= 0.0 && t >= 0.0, ErrorCode::kDomain, "times must be nonnegative");
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) -
                std::pow(std::fabs(t - s), two_h));
}

double fgn_autocovariance(std::int64_t lag, double hurst) {
  check_hurst(hurst);
  require(lag >= 0, ErrorCode::kDomain, "lag must be nonnegative");
  if (lag == 0) return 1.0;
  const double k = static_cast<double>(lag);
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, two_h) + std::pow(k - 1.0, two_h) -
                2.0 * std::pow(k, two_h));
}

struct CirculantSampler::Plan {
  fftw_plan forward = nullptr;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
  }
};

CirculantSampler::CirculantSampler(double hurst, std::int64_t n)
    : hurst_(hurst), n_(n), plan_(std::make_unique<Plan>()) {
  check_hurst(hurst);
  require(n >= 1, ErrorCode::kDomain, "need at least one increment");
  m_ = std::max<std::int64_t>(
      2, static_cast<std::int64_t>(
             std::bit_ceil(static_cast<std::uint64_t>(2 * (n - 1)))));

  FftwBuffer buffer(m_);
  {
    std::lock_guard lock(planner_mutex());
    plan_->forward = fftw_plan_dft_1d(static_cast<int>(m_), buffer.data,
                                      buffer.data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  require(plan_->forward != nullptr, ErrorCode::kInvalidArgument,
          "FFTW could not plan a transform of size " + std::to_string(m_));

  const std::int64_t half = m_ / 2;
  for (std::int64_t k = 0; k < m_; ++k) {
    const std::int64_t lag = k <= half ? k : m_ - k;
    buffer.data[k][0] = fgn_autocovariance(lag, hurst);
    buffer.data[k][1] = 0.0;
  }
  fftw_execute_dft(plan_->forward, buffer.data, buffer.data);

  eigenvalues_.resize(static_cast<std::size_t>(m_));
  double largest = 0.0;
  for (std::int64_t k = 0; k < m_; ++k) {
    eigenvalues_[k] = buffer.data[k][0];
    largest = std::max(largest, eigenvalues_[k]);
  }
  for (double& lambda : eigenvalues_) {
    if (lambda < 0.0) {
      require(lambda >= -kNegativeTolerance * largest,
              ErrorCode::kEmbeddingNotPSD,
              "circulant embedding has a significantly negative eigenvalue");
      lambda = 0.0;
    }
  }
  scale_.resize(eigenvalues_.size());
  const double inv_m = 1.0 / static_cast<double>(m_);
  std::transform(eigenvalues_.begin(), eigenvalues_.end(), scale_.begin(),
                 [inv_m](double lambda) { return std::sqrt(lambda * inv_m); });
}

CirculantSampler::~CirculantSampler() = default;

std::vector<double> CirculantSampler::embedded_covariance() const {
  FftwBuffer buffer(m_);
  for (std::int64_t k = 0; k < m_; ++k) {
    buffer.data[k][0] = eigenvalues_[k];
    buffer.data[k][1] = 0.0;
  }
  // Spectrum is real and symmetric, so the forward transform equals the
  // inverse one up to the 1/m factor.
  fftw_execute_dft(plan_->forward, buffer.data, buffer.data);
  std::vector<double> row(static_cast<std::size_t>(m_));
  for (std::int64_t k = 0; k < m_; ++k) {
    row[k] = buffer.data[k][0] / static_cast<double>(m_);
  }
  return row;
}

void CirculantSampler::sample_pair(NormalStream& rng, std::span<double> first,
                                   std::span<double> second) const {
  require(static_cast<std::int64_t>(first.size()) >= n_ &&
              static_cast<std::int64_t>(second.size()) >= n_,
          ErrorCode::kInvalidArgument, "output spans too short");
  FftwBuffer buffer(m_);
  for (std::int64_t k = 0; k < m_; ++k) {
    const double re = rng();
    const double im = rng();
    buffer.data[k][0] = scale_[k] * re;
    buffer.data[k][1] = scale_[k] * im;
  }
  fftw_execute_dft(plan_->forward, buffer.data, buffer.data);
  for (std::int64_t j = 0; j < n_; ++j) {
    first[j] = buffer.data[j][0];
    second[j] = buffer.data[j][1];
  }
}

CholeskySampler::CholeskySampler(double hurst, std::int64_t n, std::int64_t cap)
    : n_(n) {
  check_hurst(hurst);
  require(n >= 1, ErrorCode::kDomain, "need at least one increment");
  require(n <= cap, ErrorCode::kInvalidArgument,
          "Cholesky oracle limited to " + std::to_string(cap) + " steps");
  const auto size = static_cast<std::size_t>(n);
  std::vector<double> gamma(size);
  for (std::size_t k = 0; k < size; ++k) {
    gamma[k] = fgn_autocovariance(static_cast<std::int64_t>(k), hurst);
  }
  factor_.assign(size * size, 0.0);
  for (std::size_t j = 0; j < size; ++j) {
    double pivot = gamma[0];
    for (std::size_t k = 0; k < j; ++k) pivot -= factor_[j * size + k] * factor_[j * size + k];
    require(pivot >= kPivotFloor, ErrorCode::kNotPositiveDefinite,
            "increment covariance is numerically singular");
    const double diag = std::sqrt(pivot);
    factor_[j * size + j] = diag;
    for (std::size_t i = j + 1; i < size; ++i) {
      double v = gamma[i - j];
      for (std::size_t k = 0; k < j; ++k) v -= factor_[i * size + k] * factor_[j * size + k];
      factor_[i * size + j] = v / diag;
    }
  }
}

void CholeskySampler::sample(NormalStream& rng, std::span<double> out) const {
  require(static_cast<std::int64_t>(out.size()) >= n_,
          ErrorCode::kInvalidArgument, "output span too short");
  const auto size = static_cast<std::size_t>(n_);
  std::vector<double> z(size);
  for (double& v : z) v = rng();
  for (std::size_t i = 0; i < size; ++i) {
    double acc = 0.0;
    const double* row = factor_.data() + i * size;
    for (std::size_t k = 0; k <= i; ++k) acc += row[k] * z[k];
    out[i] = acc;
  }
}

namespace {

FbmPath integrate(const FbmSpec& spec,
                  const std::vector<std::vector<double>>& increments) {
  FbmPath path{spec, {}, {}};
  const auto points = static_cast<std::size_t>(spec.n_steps) + 1;
  const auto dim = static_cast<std::size_t>(spec.dim);
  path.times.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    path.times[k] = static_cast<double>(k) * spec.step;
  }
  path.values.assign(points * dim, 0.0);
  const double scale = std::pow(spec.step, spec.hurst);
  for (std::size_t c = 0; c < dim; ++c) {
    double level = 0.0;
    for (std::size_t k = 1; k < points; ++k) {
      level += scale * increments[c][k - 1];
      path.values[k * dim + c] = level;
    }
  }
  return path;
}

}  // namespace

FbmPath sample_circulant(const FbmSpec& spec, std::uint64_t seed,
                         std::uint64_t replica) {
  spec.validate();
  const CirculantSampler sampler(spec.hurst, spec.n_steps);
  const auto n = static_cast<std::size_t>(spec.n_steps);
  std::vector<std::vector<double>> increments(
      static_cast<std::size_t>(spec.dim), std::vector<double>(n));
  std::vector<double> spare(n);
  for (int c = 0; c < spec.dim; c += 2) {
    NormalStream rng(seed, replica, static_cast<std::uint64_t>(c / 2));
    auto& second = c + 1 < spec.dim ? increments[c + 1] : spare;
    sampler.sample_pair(rng, increments[c], second);
  }
  return integrate(spec, increments);
}

FbmPath sample_cholesky(const FbmSpec& spec, std::uint64_t seed,
                        std::uint64_t replica, std::int64_t cap) {
  spec.validate();
  const CholeskySampler sampler(spec.hurst, spec.n_steps, cap);
  std::vector<std::vector<double>> increments(
      static_cast<std::size_t>(spec.dim),
      std::vector<double>(static_cast<std::size_t>(spec.n_steps)));
  for (int c = 0; c < spec.dim; ++c) {
    NormalStream rng(seed, replica, static_cast<std::uint64_t>(c));
    sampler.sample(rng, increments[c]);
  }
  return integrate(spec, increments);
}

void write_csv(const FbmPath& path, std::ostream& out) {
  out << 't';
  for (int c = 1; c <= path.spec.dim; ++c) out << ",x_" << c;
  out << '\n';
  char buf[32];
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", path.times[k]);
    out << buf;
    for (int c = 0; c < path.spec.dim; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", path.at(k, c));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace occulab::fbm
