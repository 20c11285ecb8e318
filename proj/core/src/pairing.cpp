// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/pairing.hpp"

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

// Pair factor as a grid matrix W(i, j) = value(z_i at cycle vertex v, z_j at v + 1).
MatR edge_matrix(const FiberedGSpace& space, const ASEdge& e, bool reversed) {
  const int np = space.num_grid(), r = space.dim();
  std::vector<double> pts(static_cast<size_t>(np) * r);
  for (int j = 0; j < np; ++j) space.fiber().point(j, &pts[static_cast<size_t>(j) * r]);
  MatR W(np, np);
  for (int j = 0; j < np; ++j)
    for (int i = 0; i < np; ++i) {
      // Forward edges carry (z_a, z_b) = (z_i, z_j); the closing edge 2k -> 0 has them swapped.
      const double* za = &pts[static_cast<size_t>(reversed ? j : i) * r];
      const double* zb = &pts[static_cast<size_t>(reversed ? i : j) * r];
      if (e.kind == ASEdge::Kind::delta) {
        W(i, j) = lifted_difference(za[e.axis], zb[e.axis]);
      } else {
        double acc = 0.0;
        for (int a = 0; a < r; ++a) {
          double d = lifted_difference(za[a], zb[a]);
          acc += d * d;
        }
        W(i, j) = flat_bump(std::sqrt(acc), e.radius);
      }
    }
  return W;
}

MatC tile(const MatR& W, int ncomp) {
  const Eigen::Index np = W.rows();
  MatC out(np * ncomp, np * ncomp);
  for (int a = 0; a < ncomp; ++a)
    for (int b = 0; b < ncomp; ++b) out.block(a * np, b * np, np, np) = W.cast<cplx>();
  return out;
}

VecC tile(const VecC& v, int ncomp) {
  VecC out(v.size() * ncomp);
  for (int a = 0; a < ncomp; ++a) out.segment(a * v.size(), v.size()) = v;
  return out;
}

}  // namespace

cplx pair_cocycle(const FiberedGSpace& space, const ASCochain& phi, const IndexIdempotent& idx,
                  const CutoffDensity& c, const TransversalDensity& omega) {
  if (phi.degree < 0 || phi.degree % 2) fail(ErrorKind::validation, "pair_cocycle: cochain degree must be even");
  if (!phi.elementary()) fail(ErrorKind::validation, "pair_cocycle: cochain must be given by product terms");
  if (!phi.invariant) fail(ErrorKind::validation, "pair_cocycle: cochain is not flagged invariant");
  const int k2 = phi.degree;
  if (k2 > 0 && phi.germ_radius < idx.eps)
    fail(ErrorKind::validation,
         fmt::format("pair_cocycle: cochain germ radius {} is smaller than the kernel support {}; "
                     "the pairing would need values outside the germ",
                     phi.germ_radius, idx.eps));
  const int nc = idx.ncomp(), np = idx.num_grid;
  const auto& base = space.groupoid().base();
  // Edge matrices depend only on the term shape; build them once per edge.
  std::vector<std::vector<MatC>> edge_cache(phi.terms.size());
  for (size_t t = 0; t < phi.terms.size(); ++t) {
    const auto& term = phi.terms[t];
    std::vector<MatC> W(k2 + 1);
    for (int v = 0; v <= k2; ++v) W[v] = MatC::Ones(static_cast<Eigen::Index>(nc) * np, static_cast<Eigen::Index>(nc) * np);
    for (const auto& e : term.edges) {
      int a = std::min(e.a, e.b), b = std::max(e.a, e.b);
      bool swapped = e.a > e.b;
      int slot;
      bool reversed;
      if (b == a + 1) {
        slot = a;
        reversed = swapped;
      } else if (a == 0 && b == k2) {
        slot = k2;
        reversed = !swapped;
      } else {
        fail(ErrorKind::validation,
             fmt::format("pair_cocycle: factor couples vertices {} and {}, which are not adjacent on the cycle", e.a,
                         e.b));
      }
      W[slot] = W[slot].cwiseProduct(tile(edge_matrix(space, e, reversed), nc));
    }
    edge_cache[t] = std::move(W);
  }
  cplx total = 0.0;
  for (int x = 0; x < space.num_base(); ++x) {
    const MatC T = idx.P(x);
    const VecC cx = tile(VecC(c.values[x].cast<cplx>()), nc);
    cplx sx = 0.0;
    for (size_t t = 0; t < phi.terms.size(); ++t) {
      const auto& term = phi.terms[t];
      auto vertex = [&](int v) -> VecC {
        if (term.field[v] < 0) return VecC::Ones(static_cast<Eigen::Index>(nc) * np);
        return tile(phi.fields[term.field[v]][x], nc);
      };
      // M = C A_0 (T o W_0) A_1 (T o W_1) ... A_2k (T o W_2k)
      MatC M = (cx.cwiseProduct(vertex(0))).asDiagonal() * T.cwiseProduct(edge_cache[t][0]);
      for (int v = 1; v <= k2; ++v) M = (M * vertex(v).asDiagonal()) * T.cwiseProduct(edge_cache[t][v]);
      cplx value = term.coeff * M.trace();
      // e-term: phi on the diagonal times tr e = comps_f at every point.
      cplx diag = 0.0;
      VecC on_diag = VecC::Ones(np);
      for (int v = 0; v <= k2; ++v)
        if (term.field[v] >= 0) on_diag = on_diag.cwiseProduct(phi.fields[term.field[v]][x]);
      for (const auto& e : term.edges)
        if (e.kind == ASEdge::Kind::delta) on_diag.setZero();
      for (int j = 0; j < np; ++j) diag += c.values[x][j] * on_diag[j];
      sx += value - term.coeff * diag * static_cast<double>(idx.comps_f);
    }
    total += omega.measure(base, x) * sx;
  }
  return total;
}

}  // namespace leafindex
