// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "leafindex/modes.hpp"
#include "leafindex/space.hpp"

namespace leafindex {

// Matrix-valued symbol a(x, z, nu) on base x fiber x frequency lattice, with a
// declared model for large |xi| used to certify ellipticity and build ch.
struct Symbol {
  using Eval = std::function<void(int x, const double* z, const int* nu, Eigen::Ref<MatC> out)>;
  // dir is a unit covector; the model is the limit of a(x, z, t dir) up to
  // positive scaling as t -> infinity.
  using Model = std::function<void(int x, const double* z, const double* dir, Eigen::Ref<MatC> out)>;

  int rows = 1;  // rank of the target bundle
  int cols = 1;  // rank of the source bundle
  double order = 0.0;
  bool smoothing = false;  // order -infinity
  int band = 0;            // Fourier band of z -> a(x, z, nu), per axis
  bool invariant = false;
  Eval eval;
  Model model;

  MatC at(int x, const double* z, const int* nu) const;
  MatC model_at(int x, const double* z, const double* dir) const;
};

// Scalar multiplier a(nu), z-independent.
Symbol multiplier_symbol(std::function<cplx(const int* nu)> a, double order);

// max over lattice points and grid of ||a|| / (1 + |nu|^2)^{order/2}.
double order_ratio(const FiberedGSpace& space, const Symbol& a, const ModeBox& box);

// Throws listing lattice points with |nu| >= xi0 where a is singular, or model
// directions where the model is singular.
void check_elliptic(const FiberedGSpace& space, const Symbol& a, const ModeBox& box, double xi0,
                    int directions = 64);

// max |a_{t(g)}(z, A^T nu) - a_{s(g)}(psi_g z, nu)| over lattice points whose
// image stays inside the box.
double symbol_invariance_defect(const FiberedGSpace& space, const Symbol& a, const ModeBox& box);

}  // namespace leafindex
