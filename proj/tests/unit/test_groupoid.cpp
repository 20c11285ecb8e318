// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "leafindex/error.hpp"
#include "leafindex/groupoid.hpp"
#include "leafindex/space.hpp"

namespace leafindex {
namespace {

TEST(FiniteGroup, CyclicTableIsAdditionModN) {
  auto g = FiniteGroup::cyclic(5);
  ASSERT_EQ(g.order(), 5);
  // Elements of a cyclic group are generated by one element; the table must
  // be a Latin square with the identity row equal to the index row.
  for (int a = 0; a < 5; ++a) {
    std::vector<bool> seen(5, false);
    for (int b = 0; b < 5; ++b) seen[g.mul[a][b]] = true;
    for (bool s : seen) EXPECT_TRUE(s);
    EXPECT_EQ(g.mul[g.identity][a], a);
  }
}

TEST(ActionGroupoid, ArrowCountIsGroupTimesBase) {
  auto G = build_action_groupoid(FiniteGroup::cyclic(3), BaseModel::uniform(3), {{1, 2, 0}});
  EXPECT_EQ(G.num_arrows(), 9);
  EXPECT_EQ(G.associativity_violations(), 0);
}

TEST(ActionGroupoid, CompositionRespectsSourceAndTarget) {
  auto G = build_action_groupoid(FiniteGroup::cyclic(2), BaseModel::uniform(2), {{1, 0}});
  for (int g = 0; g < G.num_arrows(); ++g)
    for (int h = 0; h < G.num_arrows(); ++h) {
      auto c = G.compose(g, h);
      // g then h: defined iff g ends where h starts.
      EXPECT_EQ(c.has_value(), G.target(g) == G.source(h));
      if (c) {
        EXPECT_EQ(G.source(*c), G.source(g));
        EXPECT_EQ(G.target(*c), G.target(h));
      }
    }
}

TEST(AffineMap, HalfShiftSquaresToIdentity) {
  AffineMap m = AffineMap::translation({Rational(1, 2), Rational(0)});
  EXPECT_TRUE(m.after(m) == AffineMap::identity(2));
  EXPECT_TRUE(m.inverse() == m);
}

TEST(AffineMap, ParseRationalForms) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(FiberedGSpace, RejectsActionBreakingRelation) {
  // A third-shift does not square to the identity, so it cannot represent Z/2.
  AffineMap third = AffineMap::translation({Rational(1, 3), Rational(0)});
  EXPECT_THROW(FiberedGSpace::from_group(FiniteGroup::cyclic(2), BaseModel::uniform(1), {{0}},
                                         FiberModel{FiberModel::Kind::torus, 2, 2, 6}, {third}),
               Error);
}

TEST(FiberedGSpace, GridBelowQuadratureBoundIsRejected) {
  FiberModel f{FiberModel::Kind::torus, 2, 8, 17};
  try {
    f.validate();
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("fiber.grid"), std::string::npos);
  }
}

TEST(FiberedGSpace, FreeHalfShiftHasNoFixedPoints) {
  AffineMap shift = AffineMap::translation({Rational(1, 2), Rational(0)});
  auto space = FiberedGSpace::from_group(FiniteGroup::cyclic(2), BaseModel::uniform(1), {{0}},
                                         FiberModel{FiberModel::Kind::torus, 2, 2, 6}, {shift});
  EXPECT_TRUE(space.fixed_points().empty());
  AffineMap flip = AffineMap::identity(2);
  flip.A = -flip.A;
  auto inv = FiberedGSpace::from_group(FiniteGroup::cyclic(2), BaseModel::uniform(1), {{0}},
                                       FiberModel{FiberModel::Kind::torus, 2, 2, 6}, {flip});
  // z -> -z fixes the four half-periods, all on a 6-point grid.
  EXPECT_EQ(inv.fixed_points().size(), 4u);
}

}  // namespace
}  // namespace leafindex
