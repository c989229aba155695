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

#include "functions.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace occulab::functions {
namespace {

// exp(-x) is exactly zero in binary64 once x exceeds ~745.13.
constexpr double kUnderflowExponent = 746.0;

double parse_number(std::string_view text, std::string_view key) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  require(ec == std::errc() && ptr == last, ErrorCode::kInvalidArgument,
          "bad numeric value for '" + std::string(key) + "': '" +
              std::string(text) + "'");
  return value;
}

}  // namespace

TestFunction::TestFunction(int dim, Kind kind, double sigma, double amplitude)
    : dim_(dim), kind_(kind), sigma_(sigma), amplitude_(amplitude) {
  require(dim >= 1, ErrorCode::kDomain, "dimension must be positive");
  require(std::isfinite(amplitude), ErrorCode::kDomain, "amplitude must be finite");
  if (kind == Kind::kGaussianDifference) {
    require(std::isfinite(sigma) && sigma > 0.0 && sigma != 1.0,
            ErrorCode::kDomain, "gaussdiff needs sigma > 0, sigma != 1");
  }
  sigma_pow_minus_d_ = std::pow(sigma_, -static_cast<double>(dim_));
  norm_ = std::pow(2.0 * std::numbers::pi, 0.5 * dim_);
}

TestFunction TestFunction::gaussian_difference(int dim, double sigma,
                                               double amplitude) {
  return {dim, Kind::kGaussianDifference, sigma, amplitude};
}

TestFunction TestFunction::plain_gaussian(int dim, double amplitude) {
  return {dim, Kind::kPlainGaussian, 1.0, amplitude};
}

TestFunction TestFunction::zero(int dim) { return {dim, Kind::kZero, 1.0, 0.0}; }

TestFunction TestFunction::constant(int dim, double value) {
  return {dim, Kind::kConstant, 1.0, value};
}

TestFunction TestFunction::parse(std::string_view text, int dim) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  double sigma = 2.0;
  double scale = 1.0;
  double value = 1.0;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    require(eq != std::string_view::npos, ErrorCode::kInvalidArgument,
            "expected key=value in function spec, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const double number = parse_number(item.substr(eq + 1), key);
    if (key == "sigma") {
      sigma = number;
    } else if (key == "scale") {
      scale = number;
    } else if (key == "value" || key == "c") {
      value = number;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown function parameter '" + std::string(key) + "'");
    }
  }

  if (name == "gaussdiff" || name == "gaussian_difference") {
    return gaussian_difference(dim, sigma, scale);
  }
  if (name == "gauss" || name == "gaussian" || name == "plain_gaussian") {
    return plain_gaussian(dim, scale);
  }
  if (name == "zero") return zero(dim);
  if (name == "const" || name == "constant") return constant(dim, value);
  throw Error(ErrorCode::kInvalidArgument,
              "unknown function family '" + std::string(name) +
                  "' (expected gaussdiff, gauss, zero or const)");
}

TestFunction TestFunction::scaled(double factor) const {
  TestFunction copy = *this;
  copy.amplitude_ *= factor;
  return copy;
}

double TestFunction::eval_radial_squared(double r2) const {
  switch (kind_) {
    case Kind::kGaussianDifference:
      return amplitude_ * (std::exp(-0.5 * r2) -
                           sigma_pow_minus_d_ * std::exp(-0.5 * r2 / (sigma_ * sigma_)));
    case Kind::kPlainGaussian:
      return amplitude_ * std::exp(-0.5 * r2);
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return amplitude_;
  }
  return 0.0;
}

double TestFunction::eval(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == dim_, ErrorCode::kInvalidArgument,
          "point has wrong dimension");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return eval_radial_squared(r2);
}

double TestFunction::fourier_radial(double rho) const {
  const double r2 = rho * rho;
  switch (kind_) {
    case Kind::kGaussianDifference:
      // e^{-a} - e^{-b} = -e^{-a} expm1(a - b), free of cancellation near 0
      return -amplitude_ * norm_ * std::exp(-0.5 * r2) *
             std::expm1(-0.5 * (sigma_ * sigma_ - 1.0) * r2);
    case Kind::kPlainGaussian:
      return amplitude_ * norm_ * std::exp(-0.5 * r2);
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      // Distributional transform; only the value away from 0 is meaningful.
      return rho == 0.0 && amplitude_ != 0.0
                 ? std::numeric_limits<double>::infinity()
                 : 0.0;
  }
  return 0.0;
}

double TestFunction::fourier(std::span<const double> xi) const {
  require(static_cast<int>(xi.size()) == dim_, ErrorCode::kInvalidArgument,
          "frequency has wrong dimension");
  double r2 = 0.0;
  for (double v : xi) r2 += v * v;
  return fourier_radial(std::sqrt(r2));
}

double TestFunction::integral() const {
  switch (kind_) {
    case Kind::kGaussianDifference:
    case Kind::kZero:
      return 0.0;
    case Kind::kPlainGaussian:
      return amplitude_ * norm_;
    case Kind::kConstant:
      return amplitude_ == 0.0 ? 0.0 : std::copysign(HUGE_VAL, amplitude_);
  }
  return 0.0;
}

bool TestFunction::mean_zero() const { return integral() == 0.0; }

double TestFunction::sup_bound() const {
  switch (kind_) {
    case Kind::kGaussianDifference:
      return std::fabs(amplitude_) * std::max(1.0, sigma_pow_minus_d_);
    case Kind::kPlainGaussian:
    case Kind::kConstant:
      return std::fabs(amplitude_);
    case Kind::kZero:
      return 0.0;
  }
  return 0.0;
}

double TestFunction::support_radius() const {
  switch (kind_) {
    case Kind::kGaussianDifference:
      return std::sqrt(2.0 * kUnderflowExponent) * std::max(1.0, sigma_);
    case Kind::kPlainGaussian:
      return std::sqrt(2.0 * kUnderflowExponent);
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return amplitude_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double TestFunction::fourier_small_coefficient() const {
  switch (kind_) {
    case Kind::kGaussianDifference:
      // |e^{-a} - e^{-b}| <= |b - a|
      return std::fabs(amplitude_) * norm_ * 0.5 * std::fabs(sigma_ * sigma_ - 1.0);
    default:
      return 0.0;
  }
}

double TestFunction::fourier_decay_rate() const {
  return kind_ == Kind::kGaussianDifference ? std::min(1.0, sigma_ * sigma_) : 1.0;
}

double TestFunction::fourier_peak_bound() const {
  return std::fabs(amplitude_) * norm_;
}

std::string TestFunction::describe() const {
  char buf[96];
  switch (kind_) {
    case Kind::kGaussianDifference:
      std::snprintf(buf, sizeof buf, "gaussdiff:sigma=%.17g,scale=%.17g", sigma_, amplitude_);
      break;
    case Kind::kPlainGaussian:
      std::snprintf(buf, sizeof buf, "gauss:scale=%.17g", amplitude_);
      break;
    case Kind::kZero:
      std::snprintf(buf, sizeof buf, "zero");
      break;
    case Kind::kConstant:
      std::snprintf(buf, sizeof buf, "const:value=%.17g", amplitude_);
      break;
  }
  return buf;
}

}  // namespace occulab::functions
