// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "leafindex/groupoid.hpp"
#include "leafindex/types.hpp"

namespace leafindex {

using Rational = boost::rational<long long>;

struct FiberModel {
  enum class Kind { circle, torus };
  Kind kind = Kind::torus;
  int dim = 2;
  int cutoff = 8;  // Fourier modes -N..N per dimension
  int grid = 18;   // equispaced nodes per dimension

  int num_points() const;
  double cell_volume() const;  // h^r
  void validate() const;
  // Coordinates in [0,1) of grid point j (last dimension fastest).
  void point(int j, double* z) const;
  std::vector<int> multi_index(int j) const;
  int flat_index(const std::vector<int>& idx) const;  // wraps periodically
};

// z -> A z + theta on the torus R^r / Z^r.
struct AffineMap {
  Eigen::MatrixXi A;
  std::vector<Rational> theta;  // kept reduced to [0, 1)

  static AffineMap identity(int r);
  static AffineMap translation(const std::vector<Rational>& theta);
  int dim() const { return static_cast<int>(theta.size()); }
  AffineMap after(const AffineMap& inner) const;  // (*this) o inner
  AffineMap inverse() const;
  bool operator==(const AffineMap& o) const;
  void apply(const double* z, double* out) const;
  bool preserves_grid(int n) const;
};

Rational mod_one(Rational q);
Rational parse_rational(const std::string& s);

// Z -> M with identical torus fibers; action[g] maps the fiber over t(g) to
// the fiber over s(g).
class FiberedGSpace {
 public:
  FiberedGSpace(GroupoidModel groupoid, FiberModel fiber, std::vector<AffineMap> action);

  // Action groupoid whose fiber action is the homomorphism generated by one
  // affine map per generator.
  static FiberedGSpace from_group(const FiniteGroup& group, const BaseModel& base,
                                  const std::vector<std::vector<int>>& base_action,
                                  const FiberModel& fiber,
                                  const std::vector<AffineMap>& generator_maps);

  const GroupoidModel& groupoid() const { return groupoid_; }
  const FiberModel& fiber() const { return fiber_; }
  const AffineMap& action(int g) const { return action_[g]; }
  int num_base() const { return groupoid_.base().size(); }
  int num_grid() const { return fiber_.num_points(); }
  int dim() const { return fiber_.dim; }
  bool grid_preserving() const { return grid_preserving_; }

  // For grid-preserving actions: index of psi_g(z_j) in the fiber over s(g).
  const std::vector<int>& grid_map(int g) const;

  // (psi_g^* f)(z) = f(psi_g z) for f on the fiber over s(g); trigonometric
  // interpolation when psi_g moves grid points off the grid.
  VecC pullback(int g, const VecC& f_on_source) const;

  // Grid points fixed by non-unit arrows (freeness check), as (arrow, index).
  std::vector<std::pair<int, int>> fixed_points() const;

  // Periodic Euclidean distance between grid points of one fiber.
  MatR distance_matrix() const;

 private:
  GroupoidModel groupoid_;
  FiberModel fiber_;
  std::vector<AffineMap> action_;
  bool grid_preserving_ = true;
  std::vector<std::vector<int>> grid_maps_;
};

}  // namespace leafindex
