// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "leafindex/cochains.hpp"
#include "leafindex/density.hpp"
#include "leafindex/error.hpp"
#include "leafindex/forms.hpp"
#include "leafindex/properties.hpp"

namespace leafindex {
namespace {

ZField field(const FiberedGSpace& space, const std::function<cplx(int, double, double)>& f) {
  ZField out(space.num_base(), VecC(space.num_grid()));
  double z[2];
  for (int x = 0; x < space.num_base(); ++x)
    for (int j = 0; j < space.num_grid(); ++j) {
      space.fiber().point(j, z);
      out[x][j] = f(x, z[0], z[1]);
    }
  return out;
}

TEST(Forms, ExteriorDerivativeOfFunctionIsGradient) {
  auto space = swap_shift_space(3, 8);
  auto f = FoliatedForm::function(space, field(space, [](int, double a, double b) {
    return std::sin(2 * kPi * a) + std::cos(2 * kPi * 2 * b);
  }));
  auto df = d_leafwise(space, f);
  auto da = field(space, [](int, double a, double) { return 2 * kPi * std::cos(2 * kPi * a); });
  auto db = field(space, [](int, double, double b) { return -4 * kPi * std::sin(2 * kPi * 2 * b); });
  for (int x = 0; x < 2; ++x) {
    EXPECT_LT((df.at(x, {0}) - da[x]).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((df.at(x, {1}) - db[x]).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(Forms, QuotientIntegralIsFiberMean) {
  // Z/G for the swap-and-half-shift action is one copy of the torus, so the
  // integral of an invariant top form is its mean over the fiber at x = 0.
  auto space = swap_shift_space(3, 8);
  auto top = FoliatedForm::zero(space, 2);
  // cos(2 pi 2 z1) is invariant under the half shift; 3 is its mean-free partner.
  auto f = field(space, [](int, double a, double b) { return 3.0 + std::cos(4 * kPi * a) * std::sin(2 * kPi * b); });
  for (int x = 0; x < 2; ++x) top.comp[x][0] = f[x];
  top.invariant = true;
  for (auto bump : {constant_bump(space), cosine_bump(space, 0.6, 1)}) {
    auto c = compute_cutoff(space, bump);
    auto omega = uniform_density(space);
    EXPECT_NEAR(std::abs(integrate_invariant(space, top, c, omega) - 3.0), 0.0, 1e-12);
  }
}

TEST(Forms, NonInvariantFormIsRejected) {
  auto space = swap_shift_space(3, 8);
  auto top = FoliatedForm::zero(space, 2);
  top.comp[0][0] = field(space, [](int, double a, double) { return std::cos(2 * kPi * a); })[0];
  top.invariant = true;
  auto c = compute_cutoff(space, constant_bump(space));
  EXPECT_THROW(integrate_invariant(space, top, c, uniform_density(space)), Error);
}

TEST(Forms, TorusCohomology) {
  auto trivial = FiberedGSpace::from_group(FiniteGroup::trivial(), BaseModel::uniform(1), {},
                                           FiberModel{FiberModel::Kind::torus, 2, 3, 8}, {});
  EXPECT_EQ(invariant_cohomology_ranks(trivial, 3), (std::vector<int>{1, 2, 1}));
}

TEST(VanEst, LambdaOfElementaryTensor) {
  auto space = swap_shift_space(3, 8);
  auto f0 = field(space, [](int, double, double) { return 2.0; });
  auto f1 = field(space, [](int, double, double b) { return std::sin(2 * kPi * b); });
  auto w = van_est_lambda(space, ASCochain::elementary_tensor({f0, f1}));
  ASSERT_EQ(w.degree, 1);
  auto want = field(space, [](int, double, double b) { return 4 * kPi * std::cos(2 * kPi * b); });
  for (int x = 0; x < 2; ++x) {
    EXPECT_LT(w.at(x, {0}).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((w.at(x, {1}) - want[x]).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(VanEst, CoboundaryOfCoboundaryVanishes) {
  auto space = swap_shift_space(3, 8);
  auto f = field(space, [](int, double a, double b) { return std::cos(2 * kPi * (a + b)); });
  auto g = field(space, [](int, double a, double) { return std::sin(2 * kPi * a); });
  ASCochain phi = ASCochain::elementary_tensor({f, g});
  ASCochain dd = d_AS(d_AS(phi));
  for (int x = 0; x < 2; ++x)
    EXPECT_NEAR(std::abs(dd.evaluate(space, x, {0, 3, 9, 17})), 0.0, 1e-12);
}

}  // namespace
}  // namespace leafindex
