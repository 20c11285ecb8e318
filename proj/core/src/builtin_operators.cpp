// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/builtin_operators.hpp"

#include <cmath>

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

double lam(double k) { return std::sqrt(1.0 + k * k); }

cplx wave(int d, double t) { return std::polar(1.0, 2.0 * kPi * d * t); }

// Entry of the shift-by-d operator along one axis: source frequency k.
cplx forward_entry(int d, int k, double t, int stretch) {
  if (k >= std::max(0, -d)) return lam(stretch * k) * wave(d, t);
  if (k >= 0) return 0.0;
  return lam(stretch * k);
}

// Its adjoint: source frequency m of the target box.
cplx adjoint_entry(int d, int m, double t, int stretch) {
  if (m >= std::max(d, 0)) return lam(stretch * (m - d)) * wave(-d, t);
  if (m >= 0) return 0.0;
  return lam(stretch * m);
}

}  // namespace

OperatorSpec twisted_dolbeault(int d, int N, int stretch) {
  if (N < 1) fail(ErrorKind::validation, "twisted_dolbeault: cutoff must be positive");
  if (N + d < 0) fail(ErrorKind::validation, "twisted_dolbeault: |d| too large for the cutoff");
  OperatorSpec op;
  op.name = fmt::format("dolbeault(d={})", d);
  ModeBox e0{{-N, -N}, {N, N}};
  ModeBox e1{{-N, -N}, {N + d, N + 1}};
  ModeBox f0{{-N, -N}, {N + d, N}};
  ModeBox f1{{-N, -N}, {N, N + 1}};
  op.src.comps = {e0, e1};
  op.dst.comps = {f0, f1};
  Symbol& s = op.symbol;
  s.rows = s.cols = 2;
  s.order = 1.0;
  s.band = std::max(std::abs(d), 1);
  s.invariant = true;
  // Column q only ever sees frequencies from the box of E_q.
  s.eval = [d, stretch](int, const double* z, const int* nu, Eigen::Ref<MatC> out) {
    out(0, 0) = forward_entry(d, nu[0], z[0], stretch);
    out(1, 0) = forward_entry(1, nu[1], z[1], 1);
    out(0, 1) = -adjoint_entry(1, nu[1], z[1], 1);
    out(1, 1) = adjoint_entry(d, nu[0], z[0], stretch);
  };
  s.model = [d](int, const double* z, const double* dir, Eigen::Ref<MatC> out) {
    const double c = dir[0], sn = dir[1];
    cplx a = 0.5 * (1.0 + c) * wave(d, z[0]) + 0.5 * (1.0 - c);
    cplx b = 0.5 * (1.0 + sn) * wave(1, z[1]) + 0.5 * (1.0 - sn);
    out(0, 0) = a;
    out(0, 1) = -std::conj(b);
    out(1, 0) = b;
    out(1, 1) = std::conj(a);
  };
  return op;
}

OperatorSpec dbar(int N) {
  OperatorSpec op;
  op.name = "dbar";
  op.src = op.dst = ModeSpace::uniform(2, N, 1);
  Symbol& s = op.symbol;
  s.order = 1.0;
  s.invariant = true;
  s.eval = [](int, const double*, const int* nu, Eigen::Ref<MatC> out) {
    out(0, 0) = kPi * kI * cplx(nu[0], nu[1]);
  };
  s.model = [](int, const double*, const double* dir, Eigen::Ref<MatC> out) { out(0, 0) = kI * cplx(dir[0], dir[1]); };
  return op;
}

OperatorSpec circle_derivative(int N) {
  OperatorSpec op;
  op.name = "d/dtheta";
  op.src = op.dst = ModeSpace::uniform(1, N, 1);
  Symbol& s = op.symbol;
  s.order = 1.0;
  s.invariant = true;
  s.eval = [](int, const double*, const int* nu, Eigen::Ref<MatC> out) { out(0, 0) = 2.0 * kPi * kI * double(nu[0]); };
  s.model = [](int, const double*, const double* dir, Eigen::Ref<MatC> out) { out(0, 0) = kI * dir[0]; };
  return op;
}

OperatorSpec scalar_operator(const std::string& name, std::function<cplx(const double* z, const double* xi)> f,
                             double order, int r, int N, int band) {
  OperatorSpec op;
  op.name = name;
  op.src = op.dst = ModeSpace::uniform(r, N, 1);
  Symbol& s = op.symbol;
  s.order = order;
  s.band = band;
  s.eval = [f, r](int, const double* z, const int* nu, Eigen::Ref<MatC> out) {
    double xi[8];
    for (int a = 0; a < r; ++a) xi[a] = nu[a];
    out(0, 0) = f(z, xi);
  };
  s.model = [f, r](int, const double* z, const double* dir, Eigen::Ref<MatC> out) {
    double xi[8];
    for (int a = 0; a < r; ++a) xi[a] = 1e6 * dir[a];
    cplx v = f(z, xi);
    out(0, 0) = std::abs(v) > 0.0 ? v / std::abs(v) : 0.0;
  };
  return op;
}

}  // namespace leafindex
