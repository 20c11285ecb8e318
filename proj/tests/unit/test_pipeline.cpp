// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "leafindex/builtin_operators.hpp"
#include "leafindex/cochains.hpp"
#include "leafindex/density.hpp"
#include "leafindex/idempotent.hpp"
#include "leafindex/metric.hpp"
#include "leafindex/operator.hpp"
#include "leafindex/pairing.hpp"
#include "leafindex/parametrix.hpp"
#include "leafindex/reduction.hpp"
#include "leafindex/runner.hpp"

namespace leafindex {
namespace {

FiberedGSpace torus(int N, int grid) {
  return FiberedGSpace::from_group(FiniteGroup::trivial(), BaseModel::uniform(1), {},
                                   FiberModel{FiberModel::Kind::torus, 2, N, grid}, {});
}

FoliatedForm one(const FiberedGSpace& space) {
  auto f = FoliatedForm::function(space, ZField(space.num_base(), VecC::Ones(space.num_grid())));
  f.invariant = true;
  return f;
}

class UnitPairing : public ::testing::TestWithParam<int> {};

// <tau, idempotent> for the unit cocycle is the index, which Riemann-Roch
// forces to be the twist.
TEST_P(UnitPairing, RecoversTwist) {
  const int d = GetParam();
  auto space = torus(4, 12);
  auto c = compute_cutoff(space, constant_bump(space));
  auto omega = uniform_density(space);
  auto spec = twisted_dolbeault(d, 4);
  auto D = mark_invariant(space, quantize(space, spec.symbol, spec.src, spec.dst), 1e-10);
  auto idx = index_idempotent(space, D, parametrix(space, spec, D));
  EXPECT_LT(idempotent_defect(idx), 1e-8);
  ASCochain unit = ASCochain::elementary_tensor({ZField(1, VecC::Ones(space.num_grid()))});
  unit.invariant = true;
  EXPECT_NEAR(std::abs(pair_cocycle(space, unit, idx, c, omega) - double(d)), 0.0, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Twists, UnitPairing, ::testing::Values(-1, 0, 1));

TEST(Reduction, TrivialGroupMatchesTopologicalIndex) {
  auto space = torus(4, 12);
  auto c = compute_cutoff(space, constant_bump(space));
  auto omega = uniform_density(space);
  auto eta = constant_metric(space, MatR::Identity(2, 2));
  auto spec = twisted_dolbeault(1, 4);
  const cplx top = topological_index(space, one(space), spec.symbol, c, omega, eta);
  const cplx red = free_action_reduction(space, one(space), spec.symbol, omega);
  EXPECT_NEAR(std::abs(top - red), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(top - 1.0), 0.0, 1e-6);
}

TEST(Reduction, FixedPointsAreListed) {
  AffineMap flip = AffineMap::identity(2);
  flip.A = -flip.A;
  auto space = FiberedGSpace::from_group(FiniteGroup::cyclic(2), BaseModel::uniform(1), {{0}},
                                         FiberModel{FiberModel::Kind::torus, 2, 2, 6}, {flip});
  auto c = compute_cutoff(space, constant_bump(space));
  try {
    free_action_reduction(space, one(space), twisted_dolbeault(0, 2).symbol, uniform_density(space));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("fixed"), std::string::npos) << e.what();
  }
}

TEST(Runner, InvertibleMultiplierIsZeroClass) {
  auto r = run_scenario(*builtin_scenario("S3-invertible-multiplier"));
  ASSERT_EQ(r.status, "pass") << r.message;
  for (int i : r.analytic) EXPECT_EQ(i, 0);
  EXPECT_LT(std::abs(r.pairing), 1e-6);
  EXPECT_LT(std::abs(r.topological), 1e-6);
}

TEST(Runner, StageTaggedErrors) {
  Scenario s = *builtin_scenario("S3-invertible-multiplier");
  s.op.kind = "coefficients";
  s.op.file = "/nonexistent/operator.lixd";
  s.op.model = "nu";
  auto r = run_scenarios({s}, 1).front();
  EXPECT_EQ(r.status, "error");
  EXPECT_EQ(r.stage, "operator");
  EXPECT_EQ(r.message.rfind("[operator]", 0), 0u) << r.message;
}

TEST(Runner, CsvFormat) {
  ResultRecord r;
  r.scenario = "x";
  r.analytic = {1, 1};
  r.pairing = cplx(1.0, 1e-12);
  r.topological = 1.0;
  r.status = "pass";
  EXPECT_EQ(csv_header(), "scenario,analytic_index,pairing,topological,abs_err,status\n");
  EXPECT_EQ(format_complex(cplx(0.5, 1e-12)), "0.500000000000");
  EXPECT_NE(format_complex(cplx(0.5, 0.25)).find("0.25"), std::string::npos);
}

}  // namespace
}  // namespace leafindex
