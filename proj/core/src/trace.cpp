// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/trace.hpp"

#include <random>

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

SmoothingKernel SmoothingKernel::operator*(const SmoothingKernel& o) const {
  if (o.ncomp != ncomp || o.grid.size() != grid.size()) fail(ErrorKind::validation, "kernel product: shape mismatch");
  SmoothingKernel out = *this;
  out.support_radius = support_radius + o.support_radius;
  out.invariant = invariant && o.invariant;
  for (size_t x = 0; x < grid.size(); ++x) out.grid[x] = grid[x] * o.grid[x];
  return out;
}

SmoothingKernel SmoothingKernel::operator-(const SmoothingKernel& o) const {
  if (o.ncomp != ncomp || o.grid.size() != grid.size()) fail(ErrorKind::validation, "kernel difference: shape mismatch");
  SmoothingKernel out = *this;
  out.support_radius = std::max(support_radius, o.support_radius);
  out.invariant = invariant && o.invariant;
  for (size_t x = 0; x < grid.size(); ++x) out.grid[x] -= o.grid[x];
  return out;
}

double SmoothingKernel::norm() const {
  double m = 0.0;
  for (const auto& g : grid) m = std::max(m, g.norm());
  return m;
}

SmoothingKernel kernel_of(const FiberedGSpace& space, const OperatorFamily& P) {
  if (P.src.num_comps() != P.dst.num_comps()) fail(ErrorKind::validation, "kernel_of: operator is not an endomorphism");
  SmoothingKernel K;
  K.ncomp = P.src.num_comps();
  K.invariant = P.invariant;
  for (const auto& m : P.mats) K.grid.push_back(grid_operator(space.fiber(), P.dst, P.src, m));
  return K;
}

namespace {

// Index of psi_g(z_j) for component-major grid vectors.
std::vector<int> tiled_map(const FiberedGSpace& space, int g, int ncomp) {
  const auto& map = space.grid_map(g);
  const int np = space.num_grid();
  std::vector<int> out(static_cast<size_t>(np) * ncomp);
  for (int c = 0; c < ncomp; ++c)
    for (int j = 0; j < np; ++j) out[static_cast<size_t>(c) * np + j] = c * np + map[j];
  return out;
}

}  // namespace

double kernel_invariance_defect(const FiberedGSpace& space, const SmoothingKernel& K) {
  if (!space.grid_preserving()) fail(ErrorKind::validation, "kernel invariance needs a grid-preserving action");
  const auto& G = space.groupoid();
  double worst = 0.0;
  for (int g = 0; g < G.num_arrows(); ++g) {
    auto map = tiled_map(space, g, K.ncomp);
    const MatC& Ks = K.grid[G.source(g)];
    const MatC& Kt = K.grid[G.target(g)];
    for (Eigen::Index j = 0; j < Kt.cols(); ++j)
      for (Eigen::Index i = 0; i < Kt.rows(); ++i) worst = std::max(worst, std::abs(Kt(i, j) - Ks(map[i], map[j])));
  }
  return worst;
}

SmoothingKernel invariant_project(const FiberedGSpace& space, const SmoothingKernel& K) {
  if (!space.grid_preserving()) fail(ErrorKind::validation, "kernel averaging needs a grid-preserving action");
  const auto& G = space.groupoid();
  SmoothingKernel out = K;
  for (int x = 0; x < space.num_base(); ++x) {
    auto arrows = G.with_target(x);
    MatC acc = MatC::Zero(K.grid[x].rows(), K.grid[x].cols());
    for (int g : arrows) {
      auto map = tiled_map(space, g, K.ncomp);
      const MatC& Ks = K.grid[G.source(g)];
      for (Eigen::Index j = 0; j < acc.cols(); ++j)
        for (Eigen::Index i = 0; i < acc.rows(); ++i) acc(i, j) += Ks(map[i], map[j]);
    }
    out.grid[x] = acc / static_cast<double>(arrows.size());
  }
  out.invariant = true;
  return out;
}

SmoothingKernel truncate_support(const FiberedGSpace& space, const SmoothingKernel& K, double radius) {
  MatR D = space.distance_matrix();
  const int np = space.num_grid();
  SmoothingKernel out = K;
  out.support_radius = std::min(K.support_radius, radius);
  for (auto& m : out.grid)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (D(i % np, j % np) > radius) m(i, j) = 0.0;
  return out;
}

SmoothingKernel random_invariant_kernel(const FiberedGSpace& space, int ncomp, int band, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ModeSpace modes = ModeSpace::uniform(space.dim(), band, ncomp);
  SmoothingKernel K;
  K.ncomp = ncomp;
  for (int x = 0; x < space.num_base(); ++x) {
    MatC R(modes.size(), modes.size());
    for (Eigen::Index j = 0; j < R.cols(); ++j)
      for (Eigen::Index i = 0; i < R.rows(); ++i) R(i, j) = cplx(gauss(rng), gauss(rng));
    K.grid.push_back(grid_operator(space.fiber(), modes, modes, R));
  }
  return invariant_project(space, K);
}

cplx trace_tau(const FiberedGSpace& space, const SmoothingKernel& K, const CutoffDensity& c,
               const TransversalDensity& omega, double tol) {
  if (space.grid_preserving()) {
    double def = kernel_invariance_defect(space, K);
    if (def > tol * std::max(1.0, K.norm()))
      fail(ErrorKind::validation, fmt::format("trace_tau: kernel is not invariant (defect {:.3e})", def));
  } else if (!K.invariant) {
    fail(ErrorKind::validation, "trace_tau: kernel is not flagged invariant");
  }
  const auto& base = space.groupoid().base();
  const int np = space.num_grid();
  cplx acc = 0.0;
  for (int x = 0; x < space.num_base(); ++x) {
    cplx sx = 0.0;
    for (int comp = 0; comp < K.ncomp; ++comp)
      for (int j = 0; j < np; ++j) sx += c.values[x][j] * K.grid[x](comp * np + j, comp * np + j);
    acc += omega.measure(base, x) * sx;
  }
  return acc;
}

cplx trace_symbol_formula(const FiberedGSpace& space, const Symbol& a, const ModeSpace& modes,
                          const CutoffDensity& c, const TransversalDensity& omega) {
  if (!a.smoothing) fail(ErrorKind::validation, "trace_symbol_formula: symbol must have order -infinity");
  if (a.rows != a.cols || a.cols != modes.num_comps())
    fail(ErrorKind::validation, "trace_symbol_formula: symbol shape does not match the modes");
  const auto& base = space.groupoid().base();
  const int r = space.dim(), np = space.num_grid();
  std::vector<double> z(r);
  std::vector<int> nu(r);
  cplx acc = 0.0;
  for (int x = 0; x < space.num_base(); ++x) {
    cplx sx = 0.0;
    for (int j = 0; j < np; ++j) {
      space.fiber().point(j, z.data());
      cplx sz = 0.0;
      // Component q contributes its diagonal entry over its own box.
      for (int q = 0; q < modes.num_comps(); ++q)
        for (int i = 0; i < modes.comps[q].size(); ++i) {
          modes.comps[q].mode(i, nu.data());
          sz += a.at(x, z.data(), nu.data())(q, q);
        }
      sx += c.values[x][j] * sz;
    }
    acc += omega.measure(base, x) * space.fiber().cell_volume() * sx;
  }
  return acc;
}

}  // namespace leafindex
