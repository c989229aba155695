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

#ifndef OCCULAB_CONSTANTS_HPP
#define OCCULAB_CONSTANTS_HPP

#include "functions.hpp"

namespace occulab::constants {

struct LimitConstant {
  double c_fd = 0.0;
  double c_fd_squared = 0.0;
  double quadrature_error_estimate = 0.0;
};

struct Bracket {
  double value = 0.0;
  double quadrature_error_estimate = 0.0;
};

inline constexpr double kDefaultTolerance = 1e-13;

/// Second-order limit constant
///   C^2 = d Gamma(d/2) / (pi^{d/2} (2 pi)^d) int |f^(x)|^2 |x|^{-d} dx,
/// evaluated as (2d / (2 pi)^d) int_R |f^(e^s)|^2 ds after the radial
/// reduction and r = e^s. Throws kDivergentIntegral unless f^(0) == 0.
LimitConstant c_fd(const functions::TestFunction& f,
                   double tolerance = kDefaultTolerance);

/// Log-energy -(4/pi) int int f(x) f(y) log|x-y| dx dy for radial f on R^2,
/// computed in position space only (never touches the Fourier transform).
Bracket bracket(const functions::TestFunction& f);

/// |C^2_{f,2} - <f>| / max(C^2_{f,2}, tiny).
double norm1_residual(const functions::TestFunction& f);

/// |(2/(2 pi)^{d/2}) int_0^inf e^{-u^{2/d}/2} du - d Gamma(d/2)/pi^{d/2}|.
double gamma_identity_check(int dim);

/// Left-hand side of the identity above, by quadrature.
double gamma_identity_lhs(int dim);

}  // namespace occulab::constants

#endif  // OCCULAB_CONSTANTS_HPP
