// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "leafindex/forms.hpp"
#include "leafindex/space.hpp"

namespace leafindex {

// Lifted coordinate difference lift(b - a) in [-1/2, 1/2).
double lifted_difference(double a, double b);

// C-infinity transition: 1 on [0, R/2], 0 on [R, inf), flat at both ends.
double flat_bump(double distance, double radius);

// A factor attached to a pair of vertices (a < b).
struct ASEdge {
  enum class Kind { delta, bump };
  Kind kind = Kind::delta;
  int a = 0, b = 1;
  int axis = 0;         // delta: Delta^axis(z_a, z_b) = lift(z_b - z_a)_axis
  double radius = 0.0;  // bump: flat_bump(|z_b - z_a|, radius)
};

// coeff * prod_i f_{field[i]}(z_i) * prod_e edge_e; field index -1 means 1.
struct ASTerm {
  cplx coeff = 1.0;
  std::vector<int> field;
  std::vector<ASEdge> edges;
};

// Alexander-Spanier k-cochain on Z given by finitely many product terms.
// Fields are sampled per base point on the fiber grid.
struct ASCochain {
  int degree = 0;
  double germ_radius = 0.5;
  std::vector<ZField> fields;
  std::vector<ASTerm> terms;
  bool invariant = false;
  // Set for cochains known only through their values; lambda rejects them.
  std::function<cplx(int x, const std::vector<int>& points)> opaque;

  bool elementary() const { return !opaque; }
  // phi(z_{points[0]}, ..., z_{points[k]}) over base point x.
  cplx evaluate(const FiberedGSpace& space, int x, const std::vector<int>& points) const;

  // f_0 (x) ... (x) f_k
  static ASCochain elementary_tensor(const std::vector<ZField>& factors, double germ_radius = 0.5);
  // 1/2 [Delta^0_{01} Delta^1_{12} - Delta^1_{01} Delta^0_{12}] on a 2-torus.
  static ASCochain area_cocycle();
  // (f0 (x) f1 - f1 (x) f0) times a bump of the given radius.
  static ASCochain alternating_bump(const ZField& f0, const ZField& f1, double radius);
};

ASCochain operator+(const ASCochain& a, const ASCochain& b);
ASCochain operator*(cplx s, const ASCochain& a);

ASCochain d_AS(const ASCochain& phi);

// lambda(phi)(z) = d_{z_1} ^ ... ^ d_{z_k} phi(z_0, ..., z_k) on the diagonal;
// for f_0 (x) ... (x) f_k this is f_0 df_1 ^ ... ^ df_k.
FoliatedForm van_est_lambda(const FiberedGSpace& space, const ASCochain& phi);

// Germ of psi_g^* phi over t(g); delta edges transform linearly, bumps need
// isometric linear parts.
ASCochain pullback_cochain(const FiberedGSpace& space, int g, const ASCochain& phi);
ASCochain invariant_project(const FiberedGSpace& space, const ASCochain& phi);

// Max |phi - psi_g^* phi| over sampled tuples within the germ radius.
double cochain_invariance_defect(const FiberedGSpace& space, const ASCochain& phi, int samples,
                                 unsigned long long seed);

// Groupoid p-cochains: values on composable strings g_1 ... g_p (t(g_i) = s(g_{i+1})).
class GroupoidCochain {
 public:
  GroupoidCochain(const GroupoidModel& G, int degree);
  int degree() const { return degree_; }
  const std::vector<std::vector<int>>& strings() const { return strings_; }
  cplx& operator[](const std::vector<int>& s);
  cplx value(const std::vector<int>& s) const;
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

 private:
  friend GroupoidCochain delta(const GroupoidModel& G, const GroupoidCochain& nu);
  int degree_;
  int num_arrows_;
  std::vector<std::vector<int>> strings_;
  std::vector<long long> keys_;
  std::vector<cplx> values_;
};

GroupoidCochain delta(const GroupoidModel& G, const GroupoidCochain& nu);

// Degree-0 van Est map: a function on M becomes the leafwise 0-form nu o mu.
FoliatedForm van_est_degree0(const FiberedGSpace& space, const GroupoidCochain& nu);

}  // namespace leafindex
