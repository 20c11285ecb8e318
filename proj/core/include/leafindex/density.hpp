// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/space.hpp"

namespace leafindex {

// Values against the uniform reference density on each fiber.
struct CutoffDensity {
  ZFieldR values;
};

// c(z) = b(z) / sum_{g in G^{mu(z)}} b(g^-1 z).
CutoffDensity compute_cutoff(const FiberedGSpace& space, const ZFieldR& seed_bump);

// max_z |sum_{g in G^{mu(z)}} c(g^-1 z) - 1|.
double partition_defect(const FiberedGSpace& space, const CutoffDensity& c);

// Fiber integral of c over each base point; a cut-off function on M.
std::vector<double> base_cutoff(const FiberedGSpace& space, const CutoffDensity& c);

// Seed bump 1 + amplitude * cos(2 pi z_axis) on every fiber.
ZFieldR cosine_bump(const FiberedGSpace& space, double amplitude, int axis = 0);
ZFieldR constant_bump(const FiberedGSpace& space);

// A section of |T*M| (x) |A| trivialised against the base weights.
struct TransversalDensity {
  std::vector<double> values;
  bool invariant = false;

  // Weight of base point x in integrals over M: w_x * Omega_x.
  double measure(const BaseModel& base, int x) const { return base.weights[x] * values[x]; }
  double total_mass(const BaseModel& base) const;
};

// delta(g) = Omega(t(g)) / Omega(s(g)); a homomorphism into R_{>0}.
std::vector<double> modular_cocycle(const GroupoidModel& G, const TransversalDensity& omega);

// Validates positivity, and the invariant flag against delta == 1 (tol 1e-12).
void validate_density(const GroupoidModel& G, const TransversalDensity& omega);

// Constant Omega with mass `mass` on the coarse quotient M/G: each orbit of
// base points counts once, whatever its isotropy (sum_x w_x Omega / |G x| = mass).
TransversalDensity uniform_density(const FiberedGSpace& space, double mass = 1.0);

}  // namespace leafindex
