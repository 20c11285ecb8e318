// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "leafindex/builtin_operators.hpp"
#include "leafindex/charclass.hpp"

namespace leafindex {
namespace {

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  std::vector<double> x, w;
  gauss_legendre01(6, x, w);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "k = " << k;
  }
}

TEST(AHat, SeriesOfHalfOverSinh) {
  // (x/2)/sinh(x/2) = 1 - x^2/24 + 7 x^4/5760 - 31 x^6/967680 + ...
  auto a = a_hat_series(4);
  ASSERT_GE(a.size(), 4u);
  EXPECT_DOUBLE_EQ(a[0], 1.0);
  EXPECT_NEAR(a[1], -1.0 / 24.0, 1e-16);
  EXPECT_NEAR(a[2], 7.0 / 5760.0, 1e-17);
  EXPECT_NEAR(a[3], -31.0 / 967680.0, 1e-18);
  const auto b = a_hat_series(10);
  const double x = 0.7;
  double s = 0.0;
  for (int k = 0; k < 10; ++k) s += b[k] * std::pow(x, 2 * k);
  EXPECT_NEAR(s, (x / 2) / std::sinh(x / 2), 1e-14);
}

TEST(ExteriorAlgebra, WedgeSignsAndNilpotency) {
  ExtForm e1 = ExtForm::generator(4, 0), e2 = ExtForm::generator(4, 1);
  EXPECT_EQ(wedge_sign(0b01, 0b10), 1);
  EXPECT_EQ(wedge_sign(0b10, 0b01), -1);
  EXPECT_EQ((e1 * e2 + e2 * e1).max_abs(), 0.0);
  EXPECT_EQ((e1 * e2)[0b11], cplx(1.0));
  EXPECT_EQ((e1 * e1).max_abs(), 0.0);
}

TEST(ChernCharacter, RankAndClosedness) {
  auto grid = CotangentGrid::make(2, 8, 8, 12);
  auto P = clutching_projector(twisted_dolbeault(1, 4).symbol, 0, grid);
  auto w = chern_character_form(P);
  // degree-0 part is the trace of the projector, the rank of E0 + E1
  double worst = 0.0;
  for (int q = 0; q < grid.num_points(); ++q)
    worst = std::max(worst, std::abs(w.values[q][0] - 2.0));
  EXPECT_LT(worst, 1e-10);
  EXPECT_LT(closedness_defect(w), 1e-9);
}

class Pushforward : public ::testing::TestWithParam<int> {};

// Integrating ch of the clutched symbol over the compactified cotangent fibre
// gives a multiple of d with a universal constant; d = 1 fixes it.
TEST_P(Pushforward, IsLinearInTwist) {
  const int d = GetParam();
  auto mean = [](int twist) {
    auto fi = pushforward_ch(twisted_dolbeault(twist, 4).symbol, 0, 2, 32, 12, 24, 0);
    return fi.by_degree[0][0].mean();
  };
  EXPECT_NEAR(std::abs(mean(d) - double(d) * mean(1)), 0.0, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Twists, Pushforward, ::testing::Values(-2, 0, 2));

}  // namespace
}  // namespace leafindex
