// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/modes.hpp"
#include "leafindex/space.hpp"
#include "leafindex/symbol.hpp"

namespace leafindex {

// Per base point, a matrix from coefficients on `src` modes to `dst` modes.
struct OperatorFamily {
  ModeSpace src, dst;
  std::vector<MatC> mats;
  double order = 0.0;
  bool invariant = false;

  int num_base() const { return static_cast<int>(mats.size()); }
  OperatorFamily adjoint() const;
};

OperatorFamily compose(const OperatorFamily& P, const OperatorFamily& Q);  // P o Q
OperatorFamily operator+(const OperatorFamily& a, const OperatorFamily& b);
OperatorFamily operator*(cplx s, const OperatorFamily& a);
OperatorFamily identity_family(const ModeSpace& modes, int num_base);

// <e_mu, Op(a) e_nu> = int a(z, nu) e_{nu - mu}(z) dz by grid quadrature
// (exact for band-limited a); entries with |mu - nu| beyond the band are zero.
OperatorFamily quantize(const FiberedGSpace& space, const Symbol& a, const ModeSpace& src, const ModeSpace& dst);

// sigma(P)(z, nu) = e_{-nu}(z) (P e_nu)(z), sampled on the grid; evaluating at
// off-grid z throws.
Symbol symbol_of(const FiberedGSpace& space, const OperatorFamily& P);

// max_g || L_g P_{s(g)} - P_{t(g)} L_g ||_max with L_g the mode pullback.
double operator_invariance_defect(const FiberedGSpace& space, const OperatorFamily& P);
OperatorFamily mark_invariant(const FiberedGSpace& space, OperatorFamily P, double tol);

// Grid matrix J_dst M J_src^* h^r: acts on grid values, component-major.
MatC grid_operator(const FiberModel& fiber, const ModeSpace& dst, const ModeSpace& src, const MatC& M);

}  // namespace leafindex
