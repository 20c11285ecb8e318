// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/operator.hpp"

namespace leafindex {

struct AnalyticIndex {
  std::vector<int> index;
  std::vector<int> kernel;
  std::vector<int> cokernel;
  std::vector<double> gap;  // smallest kept / largest dropped singular value ratio (inf if none dropped)
};

// Ranks by singular values above rel_threshold * s_max; singular values within
// a factor 10 of the threshold make the rank ambiguous and raise an error.
AnalyticIndex analytic_index(const OperatorFamily& D, double rel_threshold = 1e-8);

// Throws unless the per-point index is constant on every orbit.
void check_orbit_constant(const GroupoidModel& G, const AnalyticIndex& ind);

}  // namespace leafindex
