// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

#include "leafindex/modes.hpp"
#include "leafindex/symbol.hpp"

namespace leafindex {

struct OperatorSpec {
  std::string name;
  Symbol symbol;
  ModeSpace src, dst;
};

// Dolbeault-type operator on T^2 twisted by degree d:
//   D = [[A, -B*], [B, A*]] : E0 + E1 -> F0 + F1,
// with A e_nu = lambda(s nu_1) e_{nu + d e_1} (nu_1 >= 0), lambda(s nu_1) e_nu
// (nu_1 < 0), and B the same along nu_2 with shift 1; lambda(k) = sqrt(1 + k^2).
// Its kernel is spanned by e_(j,0), 0 <= j < d; the index is d.  `stretch` s
// rescales the first frequency axis (s = 2 gives the operator induced on the
// quotient by a half shift in z_1).
OperatorSpec twisted_dolbeault(int d, int N, int stretch = 1);

// Plain d-bar = (d_1 + i d_2)/2 on T^2, symbol pi i (nu_1 + i nu_2).
OperatorSpec dbar(int N);

// d/dtheta on the circle, symbol 2 pi i nu.
OperatorSpec circle_derivative(int N);

// Scalar symbol f(z, xi), z-band `band`, order m; the large-xi model is the
// phase of f(z, t dir) for large t.
OperatorSpec scalar_operator(const std::string& name, std::function<cplx(const double* z, const double* xi)> f,
                             double order, int r, int N, int band);

}  // namespace leafindex
