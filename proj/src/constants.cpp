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

#include "constants.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "summation.hpp"

namespace occulab::constants {
namespace {

using boost::math::quadrature::gauss_kronrod;
using Rule = gauss_kronrod<double, 15>;

constexpr unsigned kMaxDepth = 18;
constexpr double kPi = std::numbers::pi;

// Adaptive G7/K15 over consecutive panels; returns the sum and accumulates the
// absolute error estimate.
template <typename F>
double integrate_panels(F&& integrand, std::span<const double> breaks,
                        double tolerance, double& error) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double panel_error = 0.0;
    total += Rule::integrate(integrand, breaks[i], breaks[i + 1], kMaxDepth,
                             tolerance, &panel_error);
    error += panel_error;
  }
  return total;
}

double roundoff_floor(double value) {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(value);
}

}  // namespace

LimitConstant c_fd(const functions::TestFunction& f, double tolerance) {
  using functions::Kind;
  require(f.kind() != Kind::kConstant || f.amplitude() == 0.0,
          ErrorCode::kDivergentIntegral,
          "constant f is not integrable; C_{f,d} diverges");
  require(f.mean_zero(), ErrorCode::kDivergentIntegral,
          "f^(0) != 0: the |x|^{-d} integral diverges at the origin");
  LimitConstant result;
  if (f.fourier_peak_bound() == 0.0 || f.kind() == Kind::kZero) return result;

  const int d = f.dim();
  const double peak = f.fourier_peak_bound();
  const double small = f.fourier_small_coefficient();
  const double rate = f.fourier_decay_rate();
  const double target = 1e-16 * peak * peak;

  // Lower cut: int_0^{r0} (K r^2)^2 dr / r = K^2 r0^4 / 4 < target.
  double r0 = 1.0;
  if (small > 0.0) r0 = std::min(1.0, std::pow(4.0 * target / (small * small), 0.25));
  // Upper cut from |f^(r)| <= peak e^{-rate r^2/2}:
  //   int_R^inf peak^2 e^{-rate r^2} dr / r <= peak^2 e^{-rate R^2} / (2 rate R^2).
  double r_cut = 1.0;
  while (peak * peak * std::exp(-rate * r_cut * r_cut) / (2.0 * rate * r_cut * r_cut) >
         target) {
    r_cut *= 1.25;
  }

  const double s_lo = std::log(r0);
  const double s_hi = std::log(r_cut);
  auto integrand = [&f](double s) {
    const double v = f.fourier_radial(std::exp(s));
    return v * v;
  };
  // Break the log axis into unit panels so the adaptive rule sees the peak.
  std::vector<double> breaks;
  for (double s = s_lo; s < s_hi; s += 1.0) breaks.push_back(s);
  breaks.push_back(s_hi);

  double error = 0.0;
  const double integral = integrate_panels(integrand, breaks, tolerance, error);
  const double prefactor = 2.0 * d / std::pow(2.0 * kPi, d);
  result.c_fd_squared = prefactor * integral;
  result.c_fd = std::sqrt(result.c_fd_squared);
  result.quadrature_error_estimate =
      prefactor * (error + 2.0 * target) + roundoff_floor(result.c_fd_squared);
  return result;
}

namespace {

// Composite Gauss-Legendre evaluation of
//   E = int_0^R rho(r) log r m(r) dr,  m(r) = int_0^r rho,
// on uniform panels. m is accumulated from the origin below `pivot` and
// from R above it, so it keeps relative accuracy in the tail.
template <typename Rule, typename F>
double radial_log_energy(F&& density, double r_max, double panel, double pivot) {
  std::vector<double> breaks;
  for (double r = 0.0; r < r_max; r += panel) breaks.push_back(r);
  breaks.push_back(r_max);
  const std::size_t panels = breaks.size() - 1;

  auto partial = [&](double lo, double hi) { return Rule::integrate(density, lo, hi); };
  std::vector<double> head(panels + 1, 0.0);
  for (std::size_t i = 0; i < panels; ++i)
    head[i + 1] = head[i] + partial(breaks[i], breaks[i + 1]);
  std::vector<double> tail(panels + 1, 0.0);
  for (std::size_t i = panels; i-- > 0;)
    tail[i] = tail[i + 1] + partial(breaks[i], breaks[i + 1]);

  CompensatedSum energy;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    const bool from_head = hi <= pivot;
    auto integrand = [&](double r) {
      if (r == 0.0) return 0.0;
      const double m = from_head ? head[i] + partial(lo, r) : -(tail[i + 1] + partial(r, hi));
      return density(r) * std::log(r) * m;
    };
    energy += Rule::integrate(integrand, lo, hi);
  }
  return energy.value();
}

}  // namespace

Bracket bracket(const functions::TestFunction& f) {
  require(f.dim() == 2, ErrorCode::kUnsupportedDimension,
          "the log-energy bracket is defined for d = 2 only");
  require(f.mean_zero(), ErrorCode::kDivergentIntegral,
          "bracket requires a mean-zero f");
  Bracket result;
  if (f.kind() == functions::Kind::kZero || f.amplitude() == 0.0) return result;

  // For radial f the circle average of log|x - y| over |y| = rho is
  // log max(|x|, rho), so
  //   int int f f log|x-y| = 2 int_0^inf 2 pi r f(r) log r m(r) dr.
  auto density = [&f](double rho) {
    return 2.0 * kPi * rho * f.eval_radial_squared(rho * rho);
  };
  const double width = std::max(1.0, f.sigma());
  const double r_max = std::min(f.support_radius(), width * std::sqrt(2.0 * 92.0));
  const double pivot = 2.0 * width;

  using boost::math::quadrature::gauss;
  const double coarse =
      radial_log_energy<gauss<double, 20>>(density, r_max, width / 8.0, pivot);
  const double fine =
      radial_log_energy<gauss<double, 30>>(density, r_max, width / 16.0, pivot);

  result.value = -(8.0 / kPi) * fine;
  result.quadrature_error_estimate =
      (8.0 / kPi) * std::fabs(fine - coarse) + roundoff_floor(result.value);
  return result;
}

double norm1_residual(const functions::TestFunction& f) {
  const LimitConstant lhs = c_fd(f);
  const Bracket rhs = bracket(f);
  const double diff = std::fabs(lhs.c_fd_squared - rhs.value);
  if (diff == 0.0) return 0.0;
  return diff / std::max(lhs.c_fd_squared, std::numeric_limits<double>::min());
}

double gamma_identity_lhs(int dim) {
  require(dim >= 1, ErrorCode::kDomain, "dimension must be positive");
  const double d = dim;
  const double two_h = 2.0 / d;
  // u = e^s: int e^{s - e^{2 s / d}/2} ds. Beyond s_hi the exponent is below
  // -700; below s_lo the integrand is below e^{-50}.
  auto integrand = [two_h](double s) {
    return std::exp(s - 0.5 * std::exp(two_h * s));
  };
  const double s_lo = -50.0;
  const double s_hi = 0.5 * d * std::log(2.0 * 800.0);
  std::vector<double> breaks;
  for (double s = s_lo; s < s_hi; s += 2.0) breaks.push_back(s);
  breaks.push_back(s_hi);
  double error = 0.0;
  const double integral = integrate_panels(integrand, breaks, 1e-15, error);
  return 2.0 / std::pow(2.0 * kPi, 0.5 * d) * integral;
}

double gamma_identity_check(int dim) {
  const double d = dim;
  const double rhs = d * std::tgamma(0.5 * d) / std::pow(kPi, 0.5 * d);
  return std::fabs(gamma_identity_lhs(dim) - rhs);
}

}  // namespace occulab::constants
