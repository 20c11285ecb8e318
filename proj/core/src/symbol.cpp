// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/symbol.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

MatC Symbol::at(int x, const double* z, const int* nu) const {
  MatC out = MatC::Zero(rows, cols);
  eval(x, z, nu, out);
  return out;
}

MatC Symbol::model_at(int x, const double* z, const double* dir) const {
  if (!model) fail(ErrorKind::validation, "symbol: no large-xi model declared");
  MatC out = MatC::Zero(rows, cols);
  model(x, z, dir, out);
  return out;
}

Symbol multiplier_symbol(std::function<cplx(const int* nu)> a, double order) {
  Symbol s;
  s.order = order;
  s.eval = [a](int, const double*, const int* nu, Eigen::Ref<MatC> out) { out(0, 0) = a(nu); };
  return s;
}

double order_ratio(const FiberedGSpace& space, const Symbol& a, const ModeBox& box) {
  const int r = space.dim();
  std::vector<double> z(r);
  std::vector<int> nu(r);
  double worst = 0.0;
  for (int x = 0; x < space.num_base(); ++x)
    for (int i = 0; i < box.size(); ++i) {
      box.mode(i, nu.data());
      double n2 = 0.0;
      for (int v : nu) n2 += static_cast<double>(v) * v;
      double w = std::pow(1.0 + n2, 0.5 * a.order);
      for (int j = 0; j < space.num_grid(); ++j) {
        space.fiber().point(j, z.data());
        worst = std::max(worst, a.at(x, z.data(), nu.data()).operatorNorm() / w);
      }
    }
  return worst;
}

void check_elliptic(const FiberedGSpace& space, const Symbol& a, const ModeBox& box, double xi0,
                    int directions) {
  if (a.rows != a.cols) fail(ErrorKind::validation, "ellipticity: symbol is not square");
  const int r = space.dim();
  std::vector<double> z(r), dir(r);
  std::vector<int> nu(r);
  std::vector<std::string> bad;
  for (int x = 0; x < space.num_base(); ++x)
    for (int i = 0; i < box.size(); ++i) {
      box.mode(i, nu.data());
      double n2 = 0.0;
      for (int v : nu) n2 += static_cast<double>(v) * v;
      if (std::sqrt(n2) < xi0) continue;
      for (int j = 0; j < space.num_grid(); ++j) {
        space.fiber().point(j, z.data());
        Eigen::JacobiSVD<MatC> svd(a.at(x, z.data(), nu.data()));
        const auto& s = svd.singularValues();
        if (s[s.size() - 1] <= 1e-12 * std::max(1.0, s[0])) {
          std::string p = "(";
          for (int c = 0; c < r; ++c) p += fmt::format("{}{}", c ? "," : "", nu[c]);
          bad.push_back(p + ")");
          break;
        }
      }
    }
  if (a.model) {
    const int ndir = r == 1 ? 2 : directions;
    for (int x = 0; x < space.num_base(); ++x)
      for (int k = 0; k < ndir; ++k) {
        if (r == 1) {
          dir[0] = k == 0 ? 1.0 : -1.0;
        } else {
          // Directions spread over the circle in the first two axes.
          double t = 2.0 * kPi * k / ndir;
          std::fill(dir.begin(), dir.end(), 0.0);
          dir[0] = std::cos(t);
          dir[1] = std::sin(t);
        }
        for (int j = 0; j < space.num_grid(); ++j) {
          space.fiber().point(j, z.data());
          Eigen::JacobiSVD<MatC> svd(a.model_at(x, z.data(), dir.data()));
          const auto& s = svd.singularValues();
          if (s[s.size() - 1] <= 1e-12 * std::max(1.0, s[0])) {
            bad.push_back(fmt::format("model direction {}", k));
            break;
          }
        }
      }
  }
  if (!bad.empty()) {
    std::string list;
    for (size_t i = 0; i < bad.size() && i < 12; ++i) list += (i ? " " : "") + bad[i];
    if (bad.size() > 12) list += fmt::format(" ... ({} total)", bad.size());
    fail(ErrorKind::validation, "symbol is not elliptic at " + list);
  }
}

double symbol_invariance_defect(const FiberedGSpace& space, const Symbol& a, const ModeBox& box) {
  const auto& G = space.groupoid();
  const int r = space.dim();
  std::vector<double> z(r), w(r);
  std::vector<int> nu(r), img(r);
  double worst = 0.0;
  for (int g = 0; g < G.num_arrows(); ++g) {
    const AffineMap& m = space.action(g);
    for (int i = 0; i < box.size(); ++i) {
      box.mode(i, nu.data());
      for (int c = 0; c < r; ++c) {
        img[c] = 0;
        for (int k = 0; k < r; ++k) img[c] += m.A(k, c) * nu[k];
      }
      if (!box.contains(img.data())) continue;
      for (int j = 0; j < space.num_grid(); ++j) {
        space.fiber().point(j, z.data());
        m.apply(z.data(), w.data());
        MatC lhs = a.at(G.target(g), z.data(), img.data());
        MatC rhs = a.at(G.source(g), w.data(), nu.data());
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

}  // namespace leafindex
