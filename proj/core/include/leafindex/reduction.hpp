// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/analytic_index.hpp"
#include "leafindex/topological.hpp"

namespace leafindex {

// Integral of alpha ^ pi_* ch over the quotient Z / G, one representative
// per orbit of grid points; requires a free, grid-preserving action.
cplx free_action_reduction(const FiberedGSpace& space, const FoliatedForm& alpha, const Symbol& a,
                           const TransversalDensity& omega, const TopologicalOptions& opt = {});

struct OrbifoldFamilyResult {
  std::vector<int> indices;  // per base point
  double chern_integral = 0.0;
  cplx topological = 0.0;
  double difference() const { return std::abs(chern_integral - topological); }
};

// Both sides of the family index theorem for a family with compact fibers:
// the integral of the index bundle's rank against the cut-off base measure,
// and the topological integral with alpha = 1.
OrbifoldFamilyResult family_index_orbifold(const FiberedGSpace& space, const OperatorFamily& D, const Symbol& a,
                                           const CutoffDensity& c, const TransversalDensity& omega,
                                           const LeafwiseMetric& eta, const TopologicalOptions& opt = {},
                                           double invariant_tol = 1e-8);

}  // namespace leafindex
