// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/density.hpp"
#include "leafindex/operator.hpp"

namespace leafindex {

// Per base point, the grid matrix of a smoothing operator on ncomp components
// (entry (i, j) is k(z_i, z_j) h^r), component-major.
struct SmoothingKernel {
  int ncomp = 1;
  std::vector<MatC> grid;
  double support_radius = kInf;
  bool invariant = false;

  SmoothingKernel operator*(const SmoothingKernel& o) const;
  SmoothingKernel operator-(const SmoothingKernel& o) const;
  double norm() const;  // max over base points of the Frobenius norm
};

SmoothingKernel kernel_of(const FiberedGSpace& space, const OperatorFamily& P);

// max_g |K_{t(g)}(z_i, z_j) - K_{s(g)}(psi_g z_i, psi_g z_j)|.
double kernel_invariance_defect(const FiberedGSpace& space, const SmoothingKernel& K);
SmoothingKernel invariant_project(const FiberedGSpace& space, const SmoothingKernel& K);

// Zero every entry between points farther apart than `radius`.
SmoothingKernel truncate_support(const FiberedGSpace& space, const SmoothingKernel& K, double radius);

// Random kernel J R J^* h^r with R Gaussian on modes |nu_a| <= band, projected to invariants.
SmoothingKernel random_invariant_kernel(const FiberedGSpace& space, int ncomp, int band, unsigned long long seed);

// tau(K) = sum_x w_x Omega_x sum_z c(z) tr k(z, z) h^r.
cplx trace_tau(const FiberedGSpace& space, const SmoothingKernel& K, const CutoffDensity& c,
               const TransversalDensity& omega, double invariance_tol = 1e-8);

// int c a mu^* Omega: sum_x w_x Omega_x sum_z h^r c(z) sum_{nu in box} tr a(x, z, nu).
cplx trace_symbol_formula(const FiberedGSpace& space, const Symbol& a, const ModeSpace& modes,
                          const CutoffDensity& c, const TransversalDensity& omega);

}  // namespace leafindex
