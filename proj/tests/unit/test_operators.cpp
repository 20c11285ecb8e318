// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/SVD>

#include "leafindex/analytic_index.hpp"
#include "leafindex/builtin_operators.hpp"
#include "leafindex/density.hpp"
#include "leafindex/error.hpp"
#include "leafindex/operator.hpp"
#include "leafindex/properties.hpp"
#include "leafindex/trace.hpp"

namespace leafindex {
namespace {

FiberedGSpace torus(int N, int grid) {
  return FiberedGSpace::from_group(FiniteGroup::trivial(), BaseModel::uniform(1), {},
                                   FiberModel{FiberModel::Kind::torus, 2, N, grid}, {});
}

int svd_index(const MatC& M) {
  Eigen::JacobiSVD<MatC> svd(M);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > 1e-8 * s[0]) ++rank;
  return static_cast<int>(M.cols()) - rank - (static_cast<int>(M.rows()) - rank);
}

class DolbeaultIndex : public ::testing::TestWithParam<int> {};

TEST_P(DolbeaultIndex, EqualsTwistDegree) {
  const int d = GetParam();
  auto space = torus(4, 12);
  auto spec = twisted_dolbeault(d, 4);
  auto D = quantize(space, spec.symbol, spec.src, spec.dst);
  auto ind = analytic_index(D);
  EXPECT_EQ(ind.index[0], d);
  EXPECT_EQ(svd_index(D.mats[0]), d);
  EXPECT_EQ(ind.kernel[0] - ind.cokernel[0], d);
}

INSTANTIATE_TEST_SUITE_P(Twists, DolbeaultIndex, ::testing::Values(-2, -1, 0, 1, 2, 3));

TEST(Operators, DbarHasIndexZeroWithConstantKernel) {
  auto space = torus(4, 12);
  auto spec = dbar(4);
  auto ind = analytic_index(quantize(space, spec.symbol, spec.src, spec.dst));
  EXPECT_EQ(ind.kernel[0], 1);
  EXPECT_EQ(ind.cokernel[0], 1);
  EXPECT_EQ(ind.index[0], 0);
}

TEST(Operators, CompositionOfMultipliersMultipliesSymbols) {
  auto space = torus(3, 8);
  auto mult = [&](double s) {
    return scalar_operator("m", [s](const double*, const double* xi) { return cplx(1.0 + s * xi[0] * xi[0], xi[1]); },
                           2.0, 2, 3, 0);
  };
  auto a = mult(1.0), b = mult(2.0);
  auto A = quantize(space, a.symbol, a.src, a.dst);
  auto B = quantize(space, b.symbol, b.src, b.dst);
  auto AB = compose(A, B);
  ASSERT_EQ(AB.mats[0].rows(), AB.src.size());
  for (int i = 0; i < AB.src.size(); ++i) {
    int nu[2];
    AB.src.comps[0].mode(i, nu);
    const cplx want = cplx(1.0 + nu[0] * nu[0], nu[1]) * cplx(1.0 + 2.0 * nu[0] * nu[0], nu[1]);
    EXPECT_NEAR(std::abs(AB.mats[0](i, i) - want), 0.0, 1e-10);
  }
}

TEST(Trace, MultiplierTraceIsSymbolSum) {
  // The kernel of a Fourier multiplier g on the torus has diagonal sum_nu g(nu),
  // so tau (with unit mass and cut-off 1) is that sum.
  auto space = torus(4, 12);
  auto modes = ModeSpace::uniform(2, 4, 1);
  Symbol a;
  a.smoothing = true;
  a.invariant = true;
  a.order = -kInf;
  a.eval = [](int, const double*, const int* nu, Eigen::Ref<MatC> out) {
    out(0, 0) = std::exp(-0.3 * (nu[0] * nu[0] + 2.0 * nu[1] * nu[1]));
  };
  auto K = kernel_of(space, quantize(space, a, modes, modes));
  auto c = compute_cutoff(space, constant_bump(space));
  double want = 0.0;
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j) want += std::exp(-0.3 * (i * i + 2.0 * j * j));
  EXPECT_NEAR(std::abs(trace_tau(space, K, c, uniform_density(space)) - want), 0.0, 1e-10);
}

TEST(Trace, RejectsNonInvariantKernel) {
  auto space = swap_shift_space(3, 8);
  auto K = random_invariant_kernel(space, 1, 2, 7);
  K.grid[0](0, 0) += 1.0;
  auto c = compute_cutoff(space, constant_bump(space));
  EXPECT_THROW(trace_tau(space, K, c, uniform_density(space)), Error);
}

}  // namespace
}  // namespace leafindex
