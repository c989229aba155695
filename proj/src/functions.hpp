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

#ifndef OCCULAB_FUNCTIONS_HPP
#define OCCULAB_FUNCTIONS_HPP

#include <span>
#include <string>
#include <string_view>

namespace occulab::functions {

enum class Kind {
  kGaussianDifference,  // e^{-|x|^2/2} - sigma^{-d} e^{-|x|^2/(2 sigma^2)}
  kPlainGaussian,       // e^{-|x|^2/2}
  kZero,
  kConstant,  // test-only; violates every decay hypothesis
};

/// Radial test function f(x) = amplitude * profile(|x|) on R^dim with a
/// closed-form Fourier transform under the convention
/// f^(xi) = int f(x) exp(-i xi.x) dx.
class TestFunction {
 public:
  static TestFunction gaussian_difference(int dim, double sigma,
                                          double amplitude = 1.0);
  static TestFunction plain_gaussian(int dim, double amplitude = 1.0);
  static TestFunction zero(int dim);
  static TestFunction constant(int dim, double value);

  /// Parses "gaussdiff:sigma=2", "gaussdiff:sigma=2,scale=-1", "gauss",
  /// "zero", "const:value=1.5".
  static TestFunction parse(std::string_view text, int dim);

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double amplitude() const { return amplitude_; }
  /// Decay exponent beta with int |f(x)| |x|^beta dx < inf.
  double beta() const { return 1.0; }

  TestFunction scaled(double factor) const;

  double eval(std::span<const double> x) const;
  double eval_radial_squared(double r2) const;
  double fourier(std::span<const double> xi) const;
  double fourier_radial(double rho) const;

  /// int f(x) dx (infinite for kConstant unless value == 0).
  double integral() const;
  bool mean_zero() const;
  /// Upper bound on sup |f|.
  double sup_bound() const;
  /// eval() returns exactly 0.0 for |x| beyond this radius.
  double support_radius() const;
  /// Coefficient K with |f^(rho)| <= K rho^2 near the origin (mean-zero
  /// families) and sigma_min^2 with |f^(rho)| <= K' e^{-sigma_min^2 rho^2/2}.
  double fourier_small_coefficient() const;
  double fourier_decay_rate() const;
  double fourier_peak_bound() const;

  std::string describe() const;

 private:
  TestFunction(int dim, Kind kind, double sigma, double amplitude);

  int dim_;
  Kind kind_;
  double sigma_;
  double amplitude_;
  double sigma_pow_minus_d_;
  double norm_;  // (2 pi)^{d/2}
};

}  // namespace occulab::functions

#endif  // OCCULAB_FUNCTIONS_HPP
