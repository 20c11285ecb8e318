// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/modes.hpp"

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

int ModeBox::size() const {
  int s = 1;
  for (int a = 0; a < dim(); ++a) s *= width(a);
  return s;
}

bool ModeBox::contains(const int* nu) const {
  for (int a = 0; a < dim(); ++a)
    if (nu[a] < lo[a] || nu[a] > hi[a]) return false;
  return true;
}

int ModeBox::index(const int* nu) const {
  if (!contains(nu)) return -1;
  int i = 0;
  for (int a = 0; a < dim(); ++a) i = i * width(a) + (nu[a] - lo[a]);
  return i;
}

void ModeBox::mode(int i, int* nu) const {
  for (int a = dim() - 1; a >= 0; --a) {
    nu[a] = lo[a] + i % width(a);
    i /= width(a);
  }
}

ModeSpace ModeSpace::uniform(int r, int N, int ncomp) {
  return {std::vector<ModeBox>(ncomp, ModeBox::cube(r, N))};
}

int ModeSpace::size() const {
  int s = 0;
  for (const auto& b : comps) s += b.size();
  return s;
}

int ModeSpace::offset(int comp) const {
  int s = 0;
  for (int c = 0; c < comp; ++c) s += comps[c].size();
  return s;
}

void ModeSpace::validate_for(const FiberModel& fiber) const {
  for (const auto& b : comps) {
    if (b.dim() != fiber.dim) fail(ErrorKind::validation, "modes: box dimension differs from the fiber");
    for (int a = 0; a < b.dim(); ++a)
      if (b.width(a) > fiber.grid || b.width(a) < 1)
        fail(ErrorKind::validation,
             fmt::format("modes: box width {} along axis {} exceeds the grid size {}", b.width(a), a, fiber.grid));
  }
}

MatC synthesis(const ModeSpace& modes, const FiberModel& fiber) {
  modes.validate_for(fiber);
  const int np = fiber.num_points(), r = fiber.dim;
  MatC J = MatC::Zero(static_cast<Eigen::Index>(np) * modes.num_comps(), modes.size());
  std::vector<double> z(r);
  std::vector<int> nu(r);
  for (int c = 0; c < modes.num_comps(); ++c) {
    const ModeBox& b = modes.comps[c];
    const int off = modes.offset(c);
    for (int m = 0; m < b.size(); ++m) {
      b.mode(m, nu.data());
      for (int j = 0; j < np; ++j) {
        fiber.point(j, z.data());
        double ph = 0.0;
        for (int a = 0; a < r; ++a) ph += nu[a] * z[a];
        J(static_cast<Eigen::Index>(c) * np + j, off + m) = std::polar(1.0, 2.0 * kPi * ph);
      }
    }
  }
  return J;
}

VecC analysis(const ModeSpace& modes, const FiberModel& fiber, const VecC& grid_values) {
  MatC J = synthesis(modes, fiber);
  return J.adjoint() * grid_values * fiber.cell_volume();
}

MatC mode_pullback(const FiberedGSpace& space, int g, const ModeSpace& modes) {
  const AffineMap& m = space.action(g);
  const int r = space.dim();
  MatC L = MatC::Zero(modes.size(), modes.size());
  std::vector<int> nu(r), img(r);
  for (int c = 0; c < modes.num_comps(); ++c) {
    const ModeBox& b = modes.comps[c];
    const int off = modes.offset(c);
    for (int i = 0; i < b.size(); ++i) {
      b.mode(i, nu.data());
      Rational ph(0);
      for (int a = 0; a < r; ++a) {
        img[a] = 0;
        for (int k = 0; k < r; ++k) img[a] += m.A(k, a) * nu[k];
        ph += Rational(nu[a]) * m.theta[a];
      }
      int j = b.index(img.data());
      if (j < 0)
        fail(ErrorKind::validation,
             fmt::format("modes: action of '{}' moves a mode outside its box", space.groupoid().arrow(g).id));
      L(off + j, off + i) = std::polar(1.0, 2.0 * kPi * boost::rational_cast<double>(mod_one(ph)));
    }
  }
  return L;
}

}  // namespace leafindex
