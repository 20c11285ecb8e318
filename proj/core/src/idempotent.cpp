// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/idempotent.hpp"

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

// Newton iteration P <- 3P^2 - 2P^3 on P = e + X until the defect is below tol.
int purify(MatC& X, const MatC& e, double eps, double tol, int max_steps) {
  MatC P = e + X;
  int steps = 0;
  for (;; ++steps) {
    MatC P2 = P * P;
    double def = (P2 - P).norm();
    if (def < tol) break;
    if (steps == max_steps)
      fail(ErrorKind::numerical,
           fmt::format("localize: Newton correction did not converge in {} steps at eps = {} (defect {:.3e})",
                       max_steps, eps, def));
    P = 3.0 * P2 - 2.0 * (P2 * P);
  }
  X = P - e;
  return steps;
}

}  // namespace

MatC IndexIdempotent::e_grid() const {
  MatC e = MatC::Zero(size(), size());
  for (int i = comps_e * num_grid; i < size(); ++i) e(i, i) = 1.0;
  return e;
}

IndexIdempotent index_idempotent(const FiberedGSpace& space, const OperatorFamily& D, const Parametrix& par,
                                 double eps, double newton_tol, int max_newton) {
  const ModeSpace& E = D.src;
  const ModeSpace& F = D.dst;
  const int ne = E.size(), nf = F.size();
  IndexIdempotent idx;
  idx.comps_e = E.num_comps();
  idx.comps_f = F.num_comps();
  idx.num_grid = space.num_grid();
  MatC JE = synthesis(E, space.fiber());
  MatC JF = synthesis(F, space.fiber());
  const double h = space.fiber().cell_volume();
  for (int x = 0; x < D.num_base(); ++x) {
    const MatC& S0 = par.R0.mats[x];
    const MatC& S1 = par.R1.mats[x];
    const MatC& Q = par.Q.mats[x];
    MatC M(ne + nf, ne + nf);
    M.topLeftCorner(ne, ne) = S0 * S0;
    M.topRightCorner(ne, nf) = (S0 + S0 * S0) * Q;
    M.bottomLeftCorner(nf, ne) = S1 * D.mats[x];
    M.bottomRightCorner(nf, nf) = -S1 * S1;
    const int ge = static_cast<int>(JE.rows()), gf = static_cast<int>(JF.rows());
    MatC G(ge + gf, ge + gf);
    G.topLeftCorner(ge, ge) = JE * M.topLeftCorner(ne, ne) * JE.adjoint();
    G.topRightCorner(ge, gf) = JE * M.topRightCorner(ne, nf) * JF.adjoint();
    G.bottomLeftCorner(gf, ge) = JF * M.bottomLeftCorner(nf, ne) * JE.adjoint();
    G.bottomRightCorner(gf, gf) = JF * M.bottomRightCorner(nf, nf) * JF.adjoint();
    idx.X.push_back(G * h);
  }
  if (std::isinf(eps)) return idx;
  return localize(space, idx, eps, newton_tol, max_newton);
}

IndexIdempotent localize(const FiberedGSpace& space, const IndexIdempotent& full, double eps, double newton_tol,
                         int max_newton) {
  if (!(eps > 0.0)) fail(ErrorKind::validation, "localize: radius must be positive");
  IndexIdempotent idx = full;
  idx.eps = eps;
  const MatR Dist = space.distance_matrix();
  const int np = full.num_grid;
  const MatC e = full.e_grid();
  for (auto& X : idx.X) {
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      for (Eigen::Index i = 0; i < X.rows(); ++i)
        if (Dist(i % np, j % np) > eps) X(i, j) = 0.0;
    idx.newton_steps = std::max(idx.newton_steps, purify(X, e, eps, newton_tol, max_newton));
  }
  return idx;
}

IndexIdempotent zero_class(const FiberedGSpace& space, int comps_e, int comps_f) {
  IndexIdempotent idx;
  idx.comps_e = comps_e;
  idx.comps_f = comps_f;
  idx.num_grid = space.num_grid();
  idx.eps = 0.0;
  idx.X.assign(space.num_base(), MatC::Zero(idx.size(), idx.size()));
  return idx;
}

double idempotent_defect(const IndexIdempotent& idx) {
  double worst = 0.0;
  for (int x = 0; x < static_cast<int>(idx.X.size()); ++x) {
    MatC P = idx.P(x);
    worst = std::max(worst, (P * P - P).norm());
  }
  return worst;
}

}  // namespace leafindex
