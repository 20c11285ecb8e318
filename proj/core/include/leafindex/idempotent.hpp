// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/parametrix.hpp"

namespace leafindex {

// Projector pair (P, e) on sections of E + F, e = diag(0, 1).  Stored as the
// grid matrices of P - e (components: those of E, then those of F).
struct IndexIdempotent {
  int comps_e = 1;  // components of E
  int comps_f = 1;  // components of F
  int num_grid = 0;
  std::vector<MatC> X;
  double eps = kInf;
  int newton_steps = 0;

  int ncomp() const { return comps_e + comps_f; }
  int size() const { return ncomp() * num_grid; }
  MatC e_grid() const;
  MatC P(int x) const { return e_grid() + X[x]; }
};

// P - e = [[S0^2, S0 (1 + S0) Q], [S1 D, -S1^2]] with S0 = 1 - QD, S1 = 1 - DQ.
// For finite eps the grid kernel is truncated to fiber distance <= eps and
// idempotency restored by P <- 3P^2 - 2P^3 until ||P^2 - P||_F < newton_tol.
IndexIdempotent index_idempotent(const FiberedGSpace& space, const OperatorFamily& D, const Parametrix& par,
                                 double eps = kInf, double newton_tol = 1e-8, int max_newton = 50);

// Same pair re-localized at a new radius, starting from the unlocalized grid data.
IndexIdempotent localize(const FiberedGSpace& space, const IndexIdempotent& full, double eps,
                         double newton_tol = 1e-8, int max_newton = 50);

// The class of (e, e).
IndexIdempotent zero_class(const FiberedGSpace& space, int comps_e, int comps_f);

// max over base points of ||P^2 - P||_F.
double idempotent_defect(const IndexIdempotent& idx);

}  // namespace leafindex
