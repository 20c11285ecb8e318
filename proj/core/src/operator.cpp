// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/operator.hpp"

#include <cmath>
#include <memory>

#include <fmt/format.h>

#include "leafindex/error.hpp"
#include "leafindex/fourier.hpp"

namespace leafindex {

OperatorFamily OperatorFamily::adjoint() const {
  OperatorFamily a;
  a.src = dst;
  a.dst = src;
  a.order = order;
  a.invariant = invariant;
  for (const auto& m : mats) a.mats.push_back(m.adjoint());
  return a;
}

OperatorFamily compose(const OperatorFamily& P, const OperatorFamily& Q) {
  if (!(P.src == Q.dst) || P.num_base() != Q.num_base())
    fail(ErrorKind::validation, "compose: mode spaces do not match");
  OperatorFamily out;
  out.src = Q.src;
  out.dst = P.dst;
  out.order = P.order + Q.order;
  out.invariant = P.invariant && Q.invariant;
  for (int x = 0; x < P.num_base(); ++x) out.mats.push_back(P.mats[x] * Q.mats[x]);
  return out;
}

OperatorFamily operator+(const OperatorFamily& a, const OperatorFamily& b) {
  if (!(a.src == b.src) || !(a.dst == b.dst) || a.num_base() != b.num_base())
    fail(ErrorKind::validation, "operator sum: mode spaces do not match");
  OperatorFamily out = a;
  out.order = std::max(a.order, b.order);
  out.invariant = a.invariant && b.invariant;
  for (int x = 0; x < a.num_base(); ++x) out.mats[x] += b.mats[x];
  return out;
}

OperatorFamily operator*(cplx s, const OperatorFamily& a) {
  OperatorFamily out = a;
  for (auto& m : out.mats) m *= s;
  return out;
}

OperatorFamily identity_family(const ModeSpace& modes, int num_base) {
  OperatorFamily I;
  I.src = I.dst = modes;
  I.invariant = true;
  I.mats.assign(num_base, MatC::Identity(modes.size(), modes.size()));
  return I;
}

OperatorFamily quantize(const FiberedGSpace& space, const Symbol& a, const ModeSpace& src, const ModeSpace& dst) {
  const FiberModel& fib = space.fiber();
  src.validate_for(fib);
  dst.validate_for(fib);
  if (a.cols != src.num_comps() || a.rows != dst.num_comps())
    fail(ErrorKind::validation,
         fmt::format("quantize: symbol is {}x{} but bundles have ranks {} -> {}", a.rows, a.cols, src.num_comps(),
                     dst.num_comps()));
  if (2 * a.band >= fib.grid) fail(ErrorKind::validation, "quantize: symbol band too large for the grid");
  const int r = fib.dim, n = fib.grid, np = fib.num_points();
  std::vector<double> pts(static_cast<size_t>(np) * r);
  for (int j = 0; j < np; ++j) fib.point(j, &pts[static_cast<size_t>(j) * r]);
  OperatorFamily P;
  P.src = src;
  P.dst = dst;
  P.order = a.smoothing ? -kInf : a.order;
  P.invariant = a.invariant;
  std::vector<int> nu(r), mu(r), slot(r);
  for (int x = 0; x < space.num_base(); ++x) {
    MatC M = MatC::Zero(dst.size(), src.size());
    MatC val(a.rows, a.cols);
    std::vector<VecC> samples(a.rows, VecC(np));
    for (int q = 0; q < src.num_comps(); ++q) {
      const ModeBox& bq = src.comps[q];
      for (int i = 0; i < bq.size(); ++i) {
        bq.mode(i, nu.data());
        for (int j = 0; j < np; ++j) {
          val.setZero();
          a.eval(x, &pts[static_cast<size_t>(j) * r], nu.data(), val);
          for (int p = 0; p < a.rows; ++p) samples[p][j] = val(p, q);
        }
        for (int p = 0; p < a.rows; ++p) {
          if (samples[p].cwiseAbs().maxCoeff() == 0.0) continue;
          VecC coef = grid_to_coefficients(samples[p], n, r);
          const ModeBox& bp = dst.comps[p];
          for (int k = 0; k < bp.size(); ++k) {
            bp.mode(k, mu.data());
            bool inband = true;
            int flat = 0;
            for (int c = 0; c < r; ++c) {
              int d = mu[c] - nu[c];
              if (std::abs(d) > a.band) inband = false;
              flat = flat * n + ((d % n) + n) % n;
            }
            if (inband) M(dst.offset(p) + k, src.offset(q) + i) = coef[flat];
          }
        }
      }
    }
    P.mats.push_back(std::move(M));
  }
  return P;
}

Symbol symbol_of(const FiberedGSpace& space, const OperatorFamily& P) {
  const FiberModel& fib = space.fiber();
  const int r = fib.dim, n = fib.grid, np = fib.num_points();
  MatC Jd = synthesis(P.dst, fib);
  // table[x][q] column i: grid samples of sigma(.)(:, q) at the i-th mode of comp q,
  // stacked over target components.
  auto table = std::make_shared<std::vector<std::vector<MatC>>>(P.num_base());
  int band = 0;
  std::vector<int> nu(r), mu(r);
  for (int x = 0; x < P.num_base(); ++x) {
    const double scale = P.mats[x].cwiseAbs().maxCoeff();
    for (int q = 0; q < P.src.num_comps(); ++q) {
      const ModeBox& bq = P.src.comps[q];
      MatC cols = Jd * P.mats[x].middleCols(P.src.offset(q), bq.size());
      for (int i = 0; i < bq.size(); ++i) {
        bq.mode(i, nu.data());
        std::vector<double> z(r);
        for (int j = 0; j < np; ++j) {
          fib.point(j, z.data());
          double ph = 0.0;
          for (int c = 0; c < r; ++c) ph += nu[c] * z[c];
          cplx e = std::polar(1.0, -2.0 * kPi * ph);
          for (int p = 0; p < P.dst.num_comps(); ++p) cols(static_cast<Eigen::Index>(p) * np + j, i) *= e;
        }
        for (int p = 0; p < P.dst.num_comps(); ++p) {
          const ModeBox& bp = P.dst.comps[p];
          for (int k = 0; k < bp.size(); ++k) {
            if (std::abs(P.mats[x](P.dst.offset(p) + k, P.src.offset(q) + i)) <= 1e-14 * scale) continue;
            bp.mode(k, mu.data());
            for (int c = 0; c < r; ++c) band = std::max(band, std::abs(mu[c] - nu[c]));
          }
        }
      }
      (*table)[x].push_back(std::move(cols));
    }
  }
  Symbol s;
  s.rows = P.dst.num_comps();
  s.cols = P.src.num_comps();
  s.order = P.order;
  s.smoothing = std::isinf(P.order) && P.order < 0;
  s.band = std::min(band, (n - 1) / 2);
  s.invariant = P.invariant;
  ModeSpace src = P.src;
  s.eval = [table, src, n, r, np](int x, const double* z, const int* nu_in, Eigen::Ref<MatC> out) {
    int j = 0;
    for (int c = 0; c < r; ++c) {
      double t = z[c] * n;
      long k = std::lround(t);
      if (std::abs(t - static_cast<double>(k)) > 1e-9)
        fail(ErrorKind::validation, "sampled symbol evaluated off the grid");
      j = j * n + static_cast<int>(((k % n) + n) % n);
    }
    out.setZero();
    for (int q = 0; q < src.num_comps(); ++q) {
      int i = src.comps[q].index(nu_in);
      if (i < 0) continue;
      for (int p = 0; p < out.rows(); ++p) out(p, q) = (*table)[x][q](static_cast<Eigen::Index>(p) * np + j, i);
    }
  };
  return s;
}

double operator_invariance_defect(const FiberedGSpace& space, const OperatorFamily& P) {
  const auto& G = space.groupoid();
  double worst = 0.0;
  for (int g = 0; g < G.num_arrows(); ++g) {
    MatC Ls = mode_pullback(space, g, P.src);
    MatC Ld = mode_pullback(space, g, P.dst);
    MatC diff = Ld * P.mats[G.source(g)] - P.mats[G.target(g)] * Ls;
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return worst;
}

OperatorFamily mark_invariant(const FiberedGSpace& space, OperatorFamily P, double tol) {
  double def = operator_invariance_defect(space, P);
  if (def > tol) fail(ErrorKind::validation, fmt::format("operator: invariance defect {:.3e} exceeds {:.1e}", def, tol));
  P.invariant = true;
  return P;
}

MatC grid_operator(const FiberModel& fiber, const ModeSpace& dst, const ModeSpace& src, const MatC& M) {
  MatC Jd = synthesis(dst, fiber);
  MatC Js = synthesis(src, fiber);
  return (Jd * M) * Js.adjoint() * fiber.cell_volume();
}

}  // namespace leafindex
