// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/density.hpp"
#include "leafindex/space.hpp"

namespace leafindex {

// Row j of values[x] holds the r x r matrix at grid point j, row-major.
struct LeafwiseMetric {
  std::vector<MatR> values;
};

LeafwiseMetric constant_metric(const FiberedGSpace& space, const MatR& g);

// Symmetry and positive-definiteness at every grid point.
void validate_metric(const FiberedGSpace& space, const LeafwiseMetric& m);

// eta_z = sum_{g in G^{mu(z)}} A^T rho(g^-1 z) A c(g^-1 z), with A the linear
// part of psi_{g^-1}.
LeafwiseMetric average_metric(const FiberedGSpace& space, const LeafwiseMetric& metric0,
                              const CutoffDensity& c);

// max over arrows and grid points of |A_g^T eta_{s(g)}(psi_g z) A_g - eta_{t(g)}(z)|.
double metric_invariance_defect(const FiberedGSpace& space, const LeafwiseMetric& eta);

}  // namespace leafindex
