// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "leafindex/coeff_io.hpp"
#include "leafindex/error.hpp"
#include "leafindex/expression.hpp"
#include "leafindex/scenario.hpp"

namespace leafindex {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(Expression, EvaluatesAgainstLibm) {
  auto e = Expression::parse("sin(2*pi*z1)^2 + exp(-xi1/3) * sqrt(nu + 1/2) - i*abs(-2)", {"z1", "xi1", "nu"});
  const cplx v[3] = {0.3, 1.5, 2.0};
  const cplx want = std::pow(std::sin(2 * kPi * 0.3), 2) + std::exp(-0.5) * std::sqrt(2.5) - cplx(0, 2);
  EXPECT_NEAR(std::abs(e(v) - want), 0.0, 1e-14);
}

TEST(Expression, PrecedenceAndUnaryMinus) {
  auto e = Expression::parse("-2^2 + 3*4 - 10/4", {});
  EXPECT_NEAR(std::abs(e(nullptr) - cplx(-4.0 + 12.0 - 2.5)), 0.0, 1e-15);
}

TEST(Expression, ErrorsNameTheColumn) {
  auto msg = message_of([] { Expression::parse("1 + * 2", {}); });
  EXPECT_NE(msg.find("column 5"), std::string::npos) << msg;
  EXPECT_EQ(kind_of([] { Expression::parse("foo(1)", {}); }), ErrorKind::validation);
}

TEST(DenseFormat, RoundTripThroughFile) {
  DenseArray a;
  a.dims = {3, 2};
  for (int i = 0; i < 6; ++i) a.values.emplace_back(i * 0.5, -i);
  auto path = std::filesystem::temp_directory_path() / "leafindex_roundtrip.lixd";
  write_dense(path, a);
  DenseArray b = read_dense(path);
  std::filesystem::remove(path);
  EXPECT_EQ(b.dims, a.dims);
  EXPECT_EQ(b.values, a.values);
}

TEST(DenseFormat, HeaderLayout) {
  DenseArray a;
  a.dims = {1};
  a.values = {cplx(1.0)};
  a.is_complex = false;
  auto bytes = encode_dense(a);
  // magic, version, ndim, one u64 extent, complex flag, one f64, crc
  ASSERT_EQ(bytes.size(), 4u + 4 + 4 + 8 + 1 + 8 + 4);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "LIXD");
}

TEST(DenseFormat, CorruptionAndTruncationAreDetected) {
  DenseArray a;
  a.dims = {4};
  a.values.assign(4, cplx(1.0, 2.0));
  auto bytes = encode_dense(a);
  auto flipped = bytes;
  flipped[30] ^= 1;
  EXPECT_EQ(kind_of([&] { decode_dense(flipped); }), ErrorKind::corrupt_cache);
  auto cut = bytes;
  cut.resize(cut.size() - 5);
  EXPECT_EQ(kind_of([&] { decode_dense(cut); }), ErrorKind::corrupt_cache);
  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { decode_dense(magic); }), ErrorKind::corrupt_cache);
}

TEST(Scenario, BuiltinDolbeault) {
  auto s = load_scenario("S1-dolbeault-d1");
  EXPECT_EQ(s.groupoid.type, "trivial");
  EXPECT_EQ(s.fiber.kind, FiberModel::Kind::torus);
  EXPECT_EQ(s.fiber.cutoff, 8);
  EXPECT_EQ(s.op.kind, "dolbeault");
  EXPECT_EQ(s.op.twist_degree, 1);
}

TEST(Scenario, DefaultsFilled) {
  auto s = parse_scenario("name: t\nseed: 3\nfiber: {fourier_cutoff: 4, grid: 10}\noperator: {kind: dolbeault, twist_degree: 1}\n");
  EXPECT_EQ(s.pairing_tol, 1e-6);
  EXPECT_EQ(s.invariant_tol, 1e-8);
  auto echo = echo_scenario(s);
  EXPECT_NE(echo.find("pairing_tol"), std::string::npos);
  // The echo parses back to the same scenario.
  EXPECT_EQ(echo_scenario(parse_scenario(echo)), echo);
}

TEST(Scenario, QuadratureBoundNamesTheField) {
  auto msg = message_of([] { parse_scenario("name: t\nseed: 1\nfiber: {fourier_cutoff: 8, grid: 16}\n"); });
  EXPECT_NE(msg.find("fiber.grid"), std::string::npos) << msg;
}

TEST(Scenario, UnknownKeyAndMissingSeed) {
  auto msg = message_of([] { parse_scenario("name: t\nseed: 1\nfibre: {grid: 4}\n"); });
  EXPECT_NE(msg.find("fibre"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(message_of([] { parse_scenario("name: t\n"); }).find("seed"), std::string::npos);
}

TEST(Scenario, RangeLimits) {
  EXPECT_EQ(kind_of([] { parse_scenario("name: t\nseed: 1\nfiber: {fourier_cutoff: 40, grid: 90}\n"); }),
            ErrorKind::validation);
  EXPECT_EQ(kind_of([] { parse_scenario("name: t\nseed: 1\ngroupoid: {base_size: 65}\n"); }), ErrorKind::validation);
}

}  // namespace
}  // namespace leafindex
