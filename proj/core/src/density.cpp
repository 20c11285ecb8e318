// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/density.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

// f(g^-1 z) for z over x = s(g): g^-1 maps the fiber over s(g) to t(g), so
// this is the pullback of f (living over t(g)) along psi_{g^-1}.
VecR pull_inverse(const FiberedGSpace& space, int g, const VecR& f_on_target) {
  int gi = space.groupoid().inverse(g);
  VecC v = space.pullback(gi, f_on_target.cast<cplx>());
  return v.real();
}

}  // namespace

CutoffDensity compute_cutoff(const FiberedGSpace& space, const ZFieldR& seed) {
  const auto& G = space.groupoid();
  const int m = space.num_base(), np = space.num_grid();
  if (static_cast<int>(seed.size()) != m) fail(ErrorKind::validation, "cutoff: seed has wrong base size");
  for (const auto& s : seed) {
    if (s.size() != np) fail(ErrorKind::validation, "cutoff: seed has wrong grid size");
    if ((s.array() < 0.0).any()) fail(ErrorKind::validation, "cutoff: seed bump must be nonnegative");
  }
  CutoffDensity c;
  c.values.resize(m);
  for (int x = 0; x < m; ++x) {
    VecR denom = VecR::Zero(np);
    for (int g : G.with_source(x)) denom += pull_inverse(space, g, seed[G.target(g)]);
    for (int j = 0; j < np; ++j)
      if (!(denom[j] > 0.0)) {
        std::vector<double> z(space.dim());
        space.fiber().point(j, z.data());
        fail(ErrorKind::validation,
             fmt::format("cutoff: orbit of grid point {} over '{}' (z0 = {:.4f}) is not covered by the seed",
                         j, G.base().points[x], z[0]));
      }
    c.values[x] = seed[x].cwiseQuotient(denom);
  }
  return c;
}

double partition_defect(const FiberedGSpace& space, const CutoffDensity& c) {
  const auto& G = space.groupoid();
  double worst = 0.0;
  for (int x = 0; x < space.num_base(); ++x) {
    VecR acc = VecR::Zero(space.num_grid());
    for (int g : G.with_source(x)) acc += pull_inverse(space, g, c.values[G.target(g)]);
    worst = std::max(worst, (acc.array() - 1.0).abs().maxCoeff());
  }
  return worst;
}

std::vector<double> base_cutoff(const FiberedGSpace& space, const CutoffDensity& c) {
  std::vector<double> out(space.num_base());
  for (int x = 0; x < space.num_base(); ++x) out[x] = c.values[x].sum() * space.fiber().cell_volume();
  return out;
}

ZFieldR cosine_bump(const FiberedGSpace& space, double amplitude, int axis) {
  ZFieldR out(space.num_base(), VecR(space.num_grid()));
  std::vector<double> z(space.dim());
  for (int x = 0; x < space.num_base(); ++x)
    for (int j = 0; j < space.num_grid(); ++j) {
      space.fiber().point(j, z.data());
      out[x][j] = 1.0 + amplitude * std::cos(2.0 * kPi * z[axis]);
    }
  return out;
}

ZFieldR constant_bump(const FiberedGSpace& space) {
  return ZFieldR(space.num_base(), VecR::Ones(space.num_grid()));
}

double TransversalDensity::total_mass(const BaseModel& base) const {
  double acc = 0.0;
  for (int x = 0; x < base.size(); ++x) acc += measure(base, x);
  return acc;
}

std::vector<double> modular_cocycle(const GroupoidModel& G, const TransversalDensity& omega) {
  if (static_cast<int>(omega.values.size()) != G.base().size())
    fail(ErrorKind::validation, "density: one value per base point is required");
  std::vector<double> delta(G.num_arrows());
  for (int g = 0; g < G.num_arrows(); ++g)
    delta[g] = omega.values[G.target(g)] / omega.values[G.source(g)];
  return delta;
}

void validate_density(const GroupoidModel& G, const TransversalDensity& omega) {
  if (static_cast<int>(omega.values.size()) != G.base().size())
    fail(ErrorKind::validation, "density.omega: one value per base point is required");
  for (double v : omega.values)
    if (!(v > 0.0)) fail(ErrorKind::validation, "density.omega: values must be positive");
  if (omega.invariant) {
    auto delta = modular_cocycle(G, omega);
    for (int g = 0; g < G.num_arrows(); ++g)
      if (std::abs(delta[g] - 1.0) > 1e-12)
        fail(ErrorKind::validation,
             fmt::format("density.invariant: modular function is {} on '{}'", delta[g], G.arrow(g).id));
  }
}

TransversalDensity uniform_density(const FiberedGSpace& space, double mass) {
  const auto& G = space.groupoid();
  const auto& base = G.base();
  double acc = 0.0;
  for (int x = 0; x < base.size(); ++x) {
    std::set<int> orbit;
    for (int g : G.with_source(x)) orbit.insert(G.target(g));
    acc += base.weights[x] / static_cast<double>(orbit.size());
  }
  TransversalDensity omega;
  omega.values.assign(base.size(), mass / acc);
  omega.invariant = true;
  return omega;
}

}  // namespace leafindex
