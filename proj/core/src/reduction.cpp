// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/reduction.hpp"

#include <numeric>
#include <string>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

cplx free_action_reduction(const FiberedGSpace& space, const FoliatedForm& alpha, const Symbol& a,
                           const TransversalDensity& omega, const TopologicalOptions& opt) {
  auto fixed = space.fixed_points();
  if (!fixed.empty()) {
    std::string list;
    for (std::size_t i = 0; i < fixed.size() && i < 8; ++i) {
      auto idx = space.fiber().multi_index(fixed[i].second);
      list += fmt::format("{}{}@({})", i ? ", " : "", space.groupoid().arrow(fixed[i].first).id,
                          fmt::join(idx, ","));
    }
    if (fixed.size() > 8) list += fmt::format(", ... ({} total)", fixed.size());
    fail(ErrorKind::validation, fmt::format("free_action_reduction: action has fixed points: {}", list));
  }
  if (!space.grid_preserving())
    fail(ErrorKind::validation, "free_action_reduction: action does not preserve the fiber grid");
  const int r = space.dim(), np = space.num_grid(), nb = space.num_base();
  if (alpha.degree % 2 != 0 || alpha.degree > r)
    fail(ErrorKind::validation, "free_action_reduction: alpha must have even degree <= r");

  // Orbits of grid points of Z.
  std::vector<int> parent(static_cast<std::size_t>(nb) * np);
  std::iota(parent.begin(), parent.end(), 0);
  const GroupoidModel& G = space.groupoid();
  for (int g = 0; g < G.num_arrows(); ++g) {
    const auto& map = space.grid_map(g);
    for (int j = 0; j < np; ++j) {
      int p = find_root(parent, G.target(g) * np + j), q = find_root(parent, G.source(g) * np + map[j]);
      if (p != q) parent[std::max(p, q)] = std::min(p, q);
    }
  }

  FoliatedForm ch = pushforward_chern(space, a, r - alpha.degree, opt);
  FoliatedForm top = wedge(alpha, ch);
  const double h = space.fiber().cell_volume();
  cplx total = 0.0;
  for (int p = 0; p < nb * np; ++p) {
    if (find_root(parent, p) != p) continue;  // roots are the smallest members
    const int x = p / np, j = p % np;
    total += omega.measure(G.base(), x) * h * top.comp[x][0][j];
  }
  return total * topological_prefactor(r, alpha.degree);
}

OrbifoldFamilyResult family_index_orbifold(const FiberedGSpace& space, const OperatorFamily& D, const Symbol& a,
                                           const CutoffDensity& c, const TransversalDensity& omega,
                                           const LeafwiseMetric& eta, const TopologicalOptions& opt,
                                           double invariant_tol) {
  const double defect = operator_invariance_defect(space, D);
  if (defect > invariant_tol)
    fail(ErrorKind::validation, fmt::format("family_index_orbifold: family is not invariant (defect {:.3e})", defect));
  AnalyticIndex ind = analytic_index(D);
  for (int x = 1; x < D.num_base(); ++x)
    if (ind.kernel[x] != ind.kernel[0] || ind.cokernel[x] != ind.cokernel[0])
      fail(ErrorKind::validation,
           fmt::format("family_index_orbifold: kernel/cokernel ranks jump between base points 0 ({}/{}) and {} ({}/{})",
                       ind.kernel[0], ind.cokernel[0], x, ind.kernel[x], ind.cokernel[x]));
  OrbifoldFamilyResult res;
  res.indices = ind.index;
  // The index bundle lives over a discrete base, so ch_[1] is its rank.
  std::vector<double> cbar = base_cutoff(space, c);
  for (int x = 0; x < D.num_base(); ++x)
    res.chern_integral += omega.measure(space.groupoid().base(), x) * cbar[x] * ind.index[x];
  FoliatedForm one = FoliatedForm::function(space, ZField(space.num_base(), VecC::Ones(space.num_grid())));
  one.invariant = true;
  res.topological = topological_index(space, one, a, c, omega, eta, opt);
  return res;
}

}  // namespace leafindex
