// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/topological.hpp"

#include <cmath>
#include <mutex>

#include <fmt/format.h>

#include "leafindex/builtin_operators.hpp"
#include "leafindex/error.hpp"

namespace leafindex {

namespace {

int auto_nz(const FiberedGSpace& space, const Symbol& a, const TopologicalOptions& opt) {
  if (opt.nz > 0) return opt.nz;
  // Sixteen nodes per unit of symbol band keeps the z quadrature near 1e-9.
  int nz = std::max(16 * std::max(1, a.band), space.fiber().grid);
  return nz + (nz % 2);
}

int auto_nang(const TopologicalOptions& opt) { return opt.nang > 0 ? opt.nang : 24; }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

FoliatedForm pushforward_chern(const FiberedGSpace& space, const Symbol& a, int degree,
                               const TopologicalOptions& opt) {
  const int r = space.dim(), n = space.fiber().grid;
  const int nz = auto_nz(space, a, opt);
  FoliatedForm out = FoliatedForm::zero(space, degree);
  for (int x = 0; x < space.num_base(); ++x) {
    FiberIntegral f = pushforward_ch(a, x, r, nz, opt.nrho, auto_nang(opt), degree);
    const auto& parts = f.by_degree[degree];
    for (std::size_t I = 0; I < parts.size(); ++I) out.comp[x][I] = low_pass_resample(parts[I], nz, n, r);
  }
  out.invariant = a.invariant;
  return out;
}

cplx topological_prefactor(int r, int degree_alpha) {
  const int k = degree_alpha / 2;
  const double orientation = (r * (r - 1) / 2) % 2 ? -1.0 : 1.0;
  return std::pow(cplx(0.0, 2.0 * kPi), -k) * (factorial(k) / factorial(2 * k)) * orientation *
         calibration_constant();
}

double calibration_constant() {
  static std::once_flag once;
  static double value = 0.0;
  std::call_once(once, [] {
    // d = 1 twisted Dolbeault on T^2 with trivial group, alpha = 1.
    const OperatorSpec D = twisted_dolbeault(1, 8);
    const int r = 2;
    TopologicalOptions opt;
    const int nz = 32;
    FiberIntegral f = pushforward_ch(D.symbol, 0, r, nz, opt.nrho, auto_nang(opt), 2);
    const double raw = f.by_degree[2][0].mean().real();
    const double orientation = -1.0;
    value = 1.0 / (orientation * raw);
  });
  return value;
}

cplx topological_index(const FiberedGSpace& space, const FoliatedForm& alpha, const Symbol& a,
                       const CutoffDensity& c, const TransversalDensity& omega, const LeafwiseMetric& eta,
                       const TopologicalOptions& opt) {
  const int r = space.dim();
  if (alpha.degree % 2 != 0 || alpha.degree > r)
    fail(ErrorKind::validation, fmt::format("topological_index: alpha has degree {} (even, <= {})", alpha.degree, r));
  if (!alpha.invariant) fail(ErrorKind::validation, "topological_index: alpha is not invariant");
  if (!a.invariant) fail(ErrorKind::validation, "topological_index: symbol is not invariant");
  if (alpha.degree < r) {
    const double defect = d_leafwise(space, alpha).max_abs();
    if (defect > 1e-8)
      fail(ErrorKind::validation, fmt::format("topological_index: alpha is not closed (|d alpha| = {:.3e})", defect));
  }
  validate_metric(space, eta);
  // The first curvature term of A-hat has degree 4 > r.
  if (r >= 4) fail(ErrorKind::validation, "topological_index: fiber dimension above 3 is not supported");

  const int q = r - alpha.degree;
  FoliatedForm ch = pushforward_chern(space, a, q, opt);
  FoliatedForm top = wedge(alpha, ch);
  const double h = space.fiber().cell_volume();
  cplx total = 0.0;
  for (int x = 0; x < space.num_base(); ++x) {
    const double mu = omega.measure(space.groupoid().base(), x);
    const VecC& f = top.comp[x][0];
    for (int j = 0; j < space.num_grid(); ++j) total += mu * h * c.values[x][j] * f[j];
  }
  return total * topological_prefactor(r, alpha.degree);
}

}  // namespace leafindex
