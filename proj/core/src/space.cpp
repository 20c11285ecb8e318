// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/space.hpp"

#include <cmath>

#include <fmt/format.h>

#include "leafindex/error.hpp"
#include "leafindex/fourier.hpp"

namespace leafindex {

int FiberModel::num_points() const {
  int p = 1;
  for (int i = 0; i < dim; ++i) p *= grid;
  return p;
}

double FiberModel::cell_volume() const { return 1.0 / num_points(); }

void FiberModel::validate() const {
  if (dim < 1) fail(ErrorKind::validation, "fiber.dim: must be positive");
  if (kind == Kind::circle && dim != 1) fail(ErrorKind::validation, "fiber.dim: a circle has dim 1");
  if (cutoff < 1) fail(ErrorKind::validation, "fiber.fourier_cutoff: must be positive");
  if (grid < 2 * cutoff + 2)
    fail(ErrorKind::validation,
         fmt::format("fiber.grid: {} < 2N+2 = {} breaks quadrature exactness for band 2N", grid,
                     2 * cutoff + 2));
}

void FiberModel::point(int j, double* z) const {
  for (int a = dim - 1; a >= 0; --a) {
    z[a] = static_cast<double>(j % grid) / grid;
    j /= grid;
  }
}

std::vector<int> FiberModel::multi_index(int j) const {
  std::vector<int> idx(dim);
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = j % grid;
    j /= grid;
  }
  return idx;
}

int FiberModel::flat_index(const std::vector<int>& idx) const {
  int j = 0;
  for (int a = 0; a < dim; ++a) j = j * grid + ((idx[a] % grid) + grid) % grid;
  return j;
}

Rational mod_one(Rational q) {
  long long fl = q.numerator() / q.denominator();
  if (q.numerator() < 0 && q.numerator() % q.denominator() != 0) --fl;
  return q - Rational(fl);
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
      auto dot = s.find('.');
      if (dot == std::string::npos) return Rational(std::stoll(s));
      // Finite decimal, e.g. "0.25".
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      long long den = 1;
      for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      return Rational(std::stoll(digits), den);
    }
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    fail(ErrorKind::validation, fmt::format("cannot parse rational '{}'", s));
  }
}

AffineMap AffineMap::identity(int r) {
  return {Eigen::MatrixXi::Identity(r, r), std::vector<Rational>(r, Rational(0))};
}

AffineMap AffineMap::translation(const std::vector<Rational>& theta) {
  AffineMap m = identity(static_cast<int>(theta.size()));
  for (size_t i = 0; i < theta.size(); ++i) m.theta[i] = mod_one(theta[i]);
  return m;
}

AffineMap AffineMap::after(const AffineMap& inner) const {
  const int r = dim();
  AffineMap out;
  out.A = A * inner.A;
  out.theta.assign(r, Rational(0));
  for (int i = 0; i < r; ++i) {
    Rational acc = theta[i];
    for (int j = 0; j < r; ++j) acc += Rational(A(i, j)) * inner.theta[j];
    out.theta[i] = mod_one(acc);
  }
  return out;
}

AffineMap AffineMap::inverse() const {
  const int r = dim();
  Eigen::MatrixXd Ad = A.cast<double>();
  double det = Ad.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    fail(ErrorKind::construction, "affine map: matrix is not in GL(r, Z)");
  Eigen::MatrixXd inv = Ad.inverse();
  AffineMap out;
  out.A = inv.array().round().cast<int>().matrix();
  out.theta.assign(r, Rational(0));
  for (int i = 0; i < r; ++i) {
    Rational acc(0);
    for (int j = 0; j < r; ++j) acc -= Rational(out.A(i, j)) * theta[j];
    out.theta[i] = mod_one(acc);
  }
  return out;
}

bool AffineMap::operator==(const AffineMap& o) const {
  if (dim() != o.dim() || A != o.A) return false;
  for (int i = 0; i < dim(); ++i)
    if (mod_one(theta[i]) != mod_one(o.theta[i])) return false;
  return true;
}

void AffineMap::apply(const double* z, double* out) const {
  const int r = dim();
  for (int i = 0; i < r; ++i) {
    double acc = boost::rational_cast<double>(theta[i]);
    for (int j = 0; j < r; ++j) acc += A(i, j) * z[j];
    out[i] = acc - std::floor(acc);
  }
}

bool AffineMap::preserves_grid(int n) const {
  for (const Rational& t : theta)
    if ((t * Rational(n)).denominator() != 1) return false;
  return true;
}

FiberedGSpace::FiberedGSpace(GroupoidModel groupoid, FiberModel fiber, std::vector<AffineMap> action)
    : groupoid_(std::move(groupoid)), fiber_(fiber), action_(std::move(action)) {
  fiber_.validate();
  const int na = groupoid_.num_arrows();
  if (static_cast<int>(action_.size()) != na)
    fail(ErrorKind::construction, "space: one affine map per arrow is required");
  for (int g = 0; g < na; ++g) {
    const AffineMap& m = action_[g];
    if (m.dim() != fiber_.dim || m.A.rows() != fiber_.dim || m.A.cols() != fiber_.dim)
      fail(ErrorKind::construction, "space: affine map dimension differs from the fiber");
    if (std::abs(std::abs(m.A.cast<double>().determinant()) - 1.0) > 1e-9)
      fail(ErrorKind::construction,
           fmt::format("space: action of '{}' is not in GL(r, Z)", groupoid_.arrow(g).id));
  }
  for (int x = 0; x < groupoid_.base().size(); ++x)
    if (!(action_[groupoid_.unit(x)] == AffineMap::identity(fiber_.dim)))
      fail(ErrorKind::construction, "space: unit arrows must act by the identity");
  for (int g1 = 0; g1 < na; ++g1)
    for (int g2 = 0; g2 < na; ++g2) {
      auto c = groupoid_.compose(g1, g2);
      if (c && !(action_[*c] == action_[g1].after(action_[g2])))
        fail(ErrorKind::construction,
             fmt::format("space: action({}{}) != action({}) o action({})", groupoid_.arrow(g1).id,
                         groupoid_.arrow(g2).id, groupoid_.arrow(g1).id, groupoid_.arrow(g2).id));
    }

  for (const AffineMap& m : action_)
    if (!m.preserves_grid(fiber_.grid)) grid_preserving_ = false;
  if (grid_preserving_) {
    const int n = fiber_.grid, r = fiber_.dim, np = fiber_.num_points();
    grid_maps_.resize(na);
    for (int g = 0; g < na; ++g) {
      const AffineMap& m = action_[g];
      grid_maps_[g].resize(np);
      for (int j = 0; j < np; ++j) {
        auto idx = fiber_.multi_index(j);
        std::vector<int> out(r);
        for (int i = 0; i < r; ++i) {
          long long acc = (m.theta[i] * Rational(n)).numerator();
          for (int k = 0; k < r; ++k) acc += static_cast<long long>(m.A(i, k)) * idx[k];
          out[i] = static_cast<int>(((acc % n) + n) % n);
        }
        grid_maps_[g][j] = fiber_.flat_index(out);
      }
    }
  }
}

FiberedGSpace FiberedGSpace::from_group(const FiniteGroup& group, const BaseModel& base,
                                        const std::vector<std::vector<int>>& base_action,
                                        const FiberModel& fiber,
                                        const std::vector<AffineMap>& generator_maps) {
  if (generator_maps.size() != group.generators.size())
    fail(ErrorKind::validation, "fiber action: one affine map per generator is required");
  GroupoidModel G = build_action_groupoid(group, base, base_action);
  // Extend the generator maps to a homomorphism by breadth-first words.
  const int n = group.order();
  std::vector<AffineMap> rho(n);
  std::vector<bool> done(n, false);
  rho[group.identity] = AffineMap::identity(fiber.dim);
  done[group.identity] = true;
  std::vector<int> queue{group.identity};
  for (size_t q = 0; q < queue.size(); ++q) {
    int h = queue[q];
    for (size_t s = 0; s < group.generators.size(); ++s) {
      int hg = group.mul[h][group.generators[s]];
      if (!done[hg]) {
        rho[hg] = rho[h].after(generator_maps[s]);
        done[hg] = true;
        queue.push_back(hg);
      }
    }
  }
  for (const auto& rel : group.relations) {
    AffineMap acc = AffineMap::identity(fiber.dim);
    for (auto [slot, e] : rel.word) {
      AffineMap step = e >= 0 ? generator_maps[slot] : generator_maps[slot].inverse();
      for (int k = 0; k < std::abs(e); ++k) acc = acc.after(step);
    }
    if (!(acc == AffineMap::identity(fiber.dim)))
      fail(ErrorKind::construction,
           fmt::format("fiber action violates relation {} of {}", rel.name, group.name));
  }
  std::vector<AffineMap> action(G.num_arrows());
  for (int g = 0; g < G.num_arrows(); ++g) action[g] = rho[G.arrow(g).element];
  return FiberedGSpace(std::move(G), fiber, std::move(action));
}

const std::vector<int>& FiberedGSpace::grid_map(int g) const {
  if (!grid_preserving_) fail(ErrorKind::internal, "grid_map: action moves grid points off the grid");
  return grid_maps_[g];
}

VecC FiberedGSpace::pullback(int g, const VecC& f) const {
  const int np = num_grid();
  VecC out(np);
  if (action_[g].preserves_grid(fiber_.grid) && grid_preserving_) {
    const auto& map = grid_maps_[g];
    for (int j = 0; j < np; ++j) out[j] = f[map[j]];
    return out;
  }
  VecC coeff = grid_to_coefficients(f, fiber_.grid, fiber_.dim);
  std::vector<double> z(fiber_.dim), w(fiber_.dim);
  for (int j = 0; j < np; ++j) {
    fiber_.point(j, z.data());
    action_[g].apply(z.data(), w.data());
    out[j] = trig_interpolate(coeff, fiber_.grid, fiber_.dim, w.data());
  }
  return out;
}

std::vector<std::pair<int, int>> FiberedGSpace::fixed_points() const {
  std::vector<std::pair<int, int>> out;
  const int np = num_grid();
  std::vector<double> z(dim()), w(dim());
  for (int g = 0; g < groupoid_.num_arrows(); ++g) {
    if (groupoid_.is_unit(g) || groupoid_.source(g) != groupoid_.target(g)) continue;
    for (int j = 0; j < np; ++j) {
      fiber_.point(j, z.data());
      action_[g].apply(z.data(), w.data());
      bool same = true;
      for (int a = 0; a < dim(); ++a) {
        double d = std::abs(w[a] - z[a]);
        if (std::min(d, 1.0 - d) > 1e-12) same = false;
      }
      if (same) out.emplace_back(g, j);
    }
  }
  return out;
}

MatR FiberedGSpace::distance_matrix() const {
  const int np = num_grid(), r = dim();
  std::vector<double> pts(static_cast<size_t>(np) * r);
  for (int j = 0; j < np; ++j) fiber_.point(j, &pts[static_cast<size_t>(j) * r]);
  MatR D(np, np);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) {
      double acc = 0.0;
      for (int a = 0; a < r; ++a) {
        double d = std::abs(pts[i * r + a] - pts[j * r + a]);
        d = std::min(d, 1.0 - d);
        acc += d * d;
      }
      D(i, j) = std::sqrt(acc);
    }
  return D;
}

}  // namespace leafindex
