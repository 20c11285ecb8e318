// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/space.hpp"
#include "leafindex/types.hpp"

namespace leafindex {

// Fourier modes lo_a <= nu_a <= hi_a, last axis fastest.
struct ModeBox {
  std::vector<int> lo, hi;

  static ModeBox cube(int r, int N) { return {std::vector<int>(r, -N), std::vector<int>(r, N)}; }
  int dim() const { return static_cast<int>(lo.size()); }
  int width(int a) const { return hi[a] - lo[a] + 1; }
  int size() const;
  bool contains(const int* nu) const;
  int index(const int* nu) const;  // -1 if outside
  void mode(int i, int* nu) const;
  bool operator==(const ModeBox& o) const { return lo == o.lo && hi == o.hi; }
};

// One mode box per bundle component; coefficient vectors are stacked by component.
struct ModeSpace {
  std::vector<ModeBox> comps;

  static ModeSpace uniform(int r, int N, int ncomp = 1);
  int num_comps() const { return static_cast<int>(comps.size()); }
  int dim() const { return comps.empty() ? 0 : comps[0].dim(); }
  int size() const;
  int offset(int comp) const;
  bool operator==(const ModeSpace& o) const { return comps == o.comps; }
  // Every box must have width <= n so that modes stay distinct on the grid.
  void validate_for(const FiberModel& fiber) const;
};

// Synthesis matrix: grid values (component-major, ncomp * n^r rows) of the
// basis e_nu per component.
MatC synthesis(const ModeSpace& modes, const FiberModel& fiber);

// Coefficients of grid data (component-major) on the given modes; exact for
// data in the span of the modes.
VecC analysis(const ModeSpace& modes, const FiberModel& fiber, const VecC& grid_values);

// Matrix of f -> f o psi_g from modes over s(g) to modes over t(g):
// e_nu o psi_g = exp(2 pi i nu.theta) e_{A^T nu}.  Throws when A^T moves a
// mode outside its box.
MatC mode_pullback(const FiberedGSpace& space, int g, const ModeSpace& modes);

}  // namespace leafindex
