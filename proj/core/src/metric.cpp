// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/metric.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

// Pull every entry of a metric field back along psi_g (field over s(g)).
MatR pull_entries(const FiberedGSpace& space, int g, const MatR& field) {
  MatR out(field.rows(), field.cols());
  for (int e = 0; e < field.cols(); ++e)
    out.col(e) = space.pullback(g, field.col(e).cast<cplx>()).real();
  return out;
}

// A^T g A with g stored as row j of a field (entries a * r + b).
MatR sandwich(const MatR& A, const MatR& field, int j, int r) {
  MatR g(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) g(a, b) = field(j, a * r + b);
  return A.transpose() * g * A;
}

}  // namespace

LeafwiseMetric constant_metric(const FiberedGSpace& space, const MatR& g) {
  const int r = space.dim();
  if (g.rows() != r || g.cols() != r) fail(ErrorKind::validation, "metric: wrong matrix size");
  MatR field(space.num_grid(), r * r);
  for (int j = 0; j < space.num_grid(); ++j)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) field(j, a * r + b) = g(a, b);
  return {std::vector<MatR>(space.num_base(), field)};
}

void validate_metric(const FiberedGSpace& space, const LeafwiseMetric& m) {
  const int r = space.dim();
  if (static_cast<int>(m.values.size()) != space.num_base())
    fail(ErrorKind::validation, "metric: one field per base point is required");
  for (int x = 0; x < space.num_base(); ++x) {
    if (m.values[x].rows() != space.num_grid() || m.values[x].cols() != r * r)
      fail(ErrorKind::validation, "metric: field has wrong shape");
    for (int j = 0; j < space.num_grid(); ++j) {
      MatR g(r, r);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) g(a, b) = m.values[x](j, a * r + b);
      if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + g.cwiseAbs().maxCoeff()))
        fail(ErrorKind::validation, fmt::format("metric: not symmetric at grid point {}", j));
      if (Eigen::SelfAdjointEigenSolver<MatR>(g).eigenvalues().minCoeff() <= 0.0)
        fail(ErrorKind::validation, fmt::format("metric: not positive-definite at grid point {}", j));
    }
  }
}

LeafwiseMetric average_metric(const FiberedGSpace& space, const LeafwiseMetric& metric0,
                              const CutoffDensity& c) {
  validate_metric(space, metric0);
  const auto& G = space.groupoid();
  const int r = space.dim(), np = space.num_grid();
  LeafwiseMetric eta;
  eta.values.assign(space.num_base(), MatR::Zero(np, r * r));
  for (int x = 0; x < space.num_base(); ++x) {
    for (int g : G.with_source(x)) {
      int gi = G.inverse(g), y = G.target(g);
      MatR rho = pull_entries(space, gi, metric0.values[y]);
      VecR cg = space.pullback(gi, c.values[y].cast<cplx>()).real();
      MatR A = space.action(gi).A.cast<double>();
      for (int j = 0; j < np; ++j) {
        MatR term = sandwich(A, rho, j, r) * cg[j];
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b) eta.values[x](j, a * r + b) += term(a, b);
      }
    }
  }
  try {
    validate_metric(space, eta);
  } catch (const Error& e) {
    fail(ErrorKind::internal, fmt::format("average_metric lost definiteness: {}", e.what()));
  }
  return eta;
}

double metric_invariance_defect(const FiberedGSpace& space, const LeafwiseMetric& eta) {
  const auto& G = space.groupoid();
  const int r = space.dim();
  double worst = 0.0;
  for (int g = 0; g < G.num_arrows(); ++g) {
    MatR pulled = pull_entries(space, g, eta.values[G.source(g)]);
    MatR A = space.action(g).A.cast<double>();
    const MatR& target = eta.values[G.target(g)];
    for (int j = 0; j < space.num_grid(); ++j) {
      MatR lhs = sandwich(A, pulled, j, r);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) worst = std::max(worst, std::abs(lhs(a, b) - target(j, a * r + b)));
    }
  }
  return worst;
}

}  // namespace leafindex
