// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "leafindex/charclass.hpp"
#include "leafindex/density.hpp"
#include "leafindex/forms.hpp"
#include "leafindex/metric.hpp"
#include "leafindex/symbol.hpp"

namespace leafindex {

// Resolution of the cotangent model.  nz = 0 picks a fine z grid from the
// symbol band; nang = 0 picks a default angular grid.
struct TopologicalOptions {
  int nz = 0;
  int nrho = 12;
  int nang = 0;
};

// pi_* (ch(sigma) - rank e) in z-degree `degree` on the fiber grid of the
// space: computed on a fine grid, then low-pass resampled.
FoliatedForm pushforward_chern(const FiberedGSpace& space, const Symbol& a, int degree,
                               const TopologicalOptions& opt = {});

// Overall constant making the d = 1 twisted Dolbeault operator on T^2 have
// topological index 1; computed once.
double calibration_constant();

// (2 pi i)^{-k} k!/(2k)! * integral of c * alpha ^ A-hat ^ pi_* ch against the
// base measure, times the orientation sign and the calibration constant.
// alpha must be invariant, closed and of even degree 2k <= r.
cplx topological_index(const FiberedGSpace& space, const FoliatedForm& alpha, const Symbol& a,
                       const CutoffDensity& c, const TransversalDensity& omega, const LeafwiseMetric& eta,
                       const TopologicalOptions& opt = {});

// Scalar factor shared by the topological and quotient integrals.
cplx topological_prefactor(int r, int degree_alpha);

}  // namespace leafindex
