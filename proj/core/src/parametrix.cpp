// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/parametrix.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

bool on_shell(const ModeBox& b, const int* nu, int width) {
  for (int a = 0; a < b.dim(); ++a)
    if (nu[a] - b.lo[a] < width || b.hi[a] - nu[a] < width) return true;
  return false;
}

std::vector<int> shell_indices(const ModeSpace& m, int width) {
  std::vector<int> out;
  std::vector<int> nu(m.dim());
  for (int c = 0; c < m.num_comps(); ++c)
    for (int i = 0; i < m.comps[c].size(); ++i) {
      m.comps[c].mode(i, nu.data());
      if (on_shell(m.comps[c], nu.data(), width)) out.push_back(m.offset(c) + i);
    }
  return out;
}

OperatorFamily remainder(const OperatorFamily& A, const OperatorFamily& B) {
  OperatorFamily R = compose(A, B);
  for (auto& m : R.mats) m = MatC::Identity(m.rows(), m.cols()) - m;
  R.order = -kInf;
  return R;
}

}  // namespace

double shell_magnitude(const OperatorFamily& R, int width) {
  auto rows = shell_indices(R.dst, width);
  auto cols = shell_indices(R.src, width);
  double m = 0.0;
  for (const auto& M : R.mats) {
    for (int i : rows) m = std::max(m, M.row(i).cwiseAbs().maxCoeff());
    for (int j : cols) m = std::max(m, M.col(j).cwiseAbs().maxCoeff());
  }
  return m;
}

Parametrix parametrix(const FiberedGSpace& space, const OperatorSpec& spec, const OperatorFamily& D,
                      const ParametrixOptions& opt) {
  const Symbol& a = spec.symbol;
  const int r = space.dim();
  // Ellipticity on the lattice (both source boxes) and of the model.
  double xi0 = opt.xi0;
  if (xi0 < 0.0) {
    int half = 1 << 20;
    for (const auto& box : spec.src.comps)
      for (int c = 0; c < box.dim(); ++c) half = std::min(half, box.width(c) / 2);
    xi0 = 0.5 * half;
  }
  for (const auto& box : spec.src.comps) check_elliptic(space, a, box, xi0);

  // Smallest singular value of the symbol on the outer shell of the source boxes.
  double smin = kInf;
  std::vector<double> z(r);
  std::vector<int> nu(r);
  for (int x = 0; x < space.num_base(); ++x)
    for (const auto& box : spec.src.comps)
      for (int i = 0; i < box.size(); ++i) {
        box.mode(i, nu.data());
        if (!on_shell(box, nu.data(), 1)) continue;
        for (int j = 0; j < space.num_grid(); j += std::max(1, space.num_grid() / 16)) {
          space.fiber().point(j, z.data());
          Eigen::JacobiSVD<MatC> svd(a.at(x, z.data(), nu.data()));
          smin = std::min(smin, svd.singularValues().tail(1)(0));
        }
      }
  if (!(smin > 0.0) || std::isinf(smin)) fail(ErrorKind::numerical, "parametrix: symbol degenerates on the shell");
  const double t = opt.heat_exponent / (smin * smin);

  // Q0 = f_t(D*D) D* by functional calculus on each fiber; then Q0 D = 1 - exp(-t D*D).
  Parametrix P;
  P.t = t;
  P.Q.src = D.dst;
  P.Q.dst = D.src;
  for (const MatC& M : D.mats) {
    Eigen::SelfAdjointEigenSolver<MatC> es(M.adjoint() * M);
    const VecR& lam = es.eigenvalues();
    VecC f(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) f[k] = lam[k] > 1e-300 ? -std::expm1(-t * lam[k]) / lam[k] : t;
    P.Q.mats.push_back(es.eigenvectors() * f.asDiagonal() * (es.eigenvectors().adjoint() * M.adjoint()));
  }
  P.Q.order = -D.order;
  P.R0 = remainder(P.Q, D);
  P.R1 = remainder(D, P.Q);
  for (; P.iterations < opt.max_iterations; ++P.iterations) {
    bool done;
    if (opt.mode == ParametrixOptions::Mode::smoothing) {
      done = shell_magnitude(P.R0) < opt.shell_tol && shell_magnitude(P.R1) < opt.shell_tol;
    } else {
      double def = 0.0;
      for (const auto& R : {P.R0, P.R1})
        for (const auto& m : R.mats) def = std::max(def, (m * m - m).cwiseAbs().maxCoeff());
      done = def < opt.projective_tol;
    }
    if (done) break;
    // Q <- Q + R0 Q, i.e. (2 - QD) Q.
    for (int x = 0; x < D.num_base(); ++x) P.Q.mats[x] += P.R0.mats[x] * P.Q.mats[x];
    P.R0 = remainder(P.Q, D);
    P.R1 = remainder(D, P.Q);
  }
  if (P.iterations == opt.max_iterations)
    fail(ErrorKind::numerical, fmt::format("parametrix: no convergence in {} steps", opt.max_iterations));
  P.Q.invariant = D.invariant;
  P.R0.invariant = P.R1.invariant = D.invariant;
  return P;
}

}  // namespace leafindex
