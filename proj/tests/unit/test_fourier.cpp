// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "leafindex/fourier.hpp"

namespace leafindex {
namespace {

VecC sample(int n, const std::function<cplx(double, double)>& f) {
  VecC v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i * n + j] = f(double(i) / n, double(j) / n);
  return v;
}

TEST(Fourier, CoefficientsOfKnownPolynomial) {
  const int n = 8;
  VecC f = sample(n, [](double x, double y) {
    return 2.0 + 3.0 * std::exp(cplx(0, 2 * kPi * (x - 2 * y)));
  });
  VecC c = grid_to_coefficients(f, n, 2);
  EXPECT_NEAR(std::abs(c[0] - 2.0), 0.0, 1e-13);
  // frequency (1, -2) sits in slot (1, n - 2)
  EXPECT_NEAR(std::abs(c[1 * n + (n - 2)] - 3.0), 0.0, 1e-13);
  VecC back = coefficients_to_grid(c, n, 2);
  EXPECT_LT((back - f).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Fourier, SpectralDerivativeMatchesCalculus) {
  const int n = 12;
  VecC f = sample(n, [](double x, double y) { return std::sin(2 * kPi * x) * std::cos(4 * kPi * y); });
  VecC want = sample(n, [](double x, double y) { return 2 * kPi * std::cos(2 * kPi * x) * std::cos(4 * kPi * y); });
  EXPECT_LT((spectral_derivative(f, n, 2, 0) - want).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Fourier, InterpolationOffGrid) {
  const int n = 10;
  auto f = [](double x, double y) { return std::cos(2 * kPi * (2 * x + y)) + 0.5; };
  VecC c = grid_to_coefficients(sample(n, f), n, 2);
  const double z[2] = {0.137, 0.711};
  EXPECT_NEAR(std::abs(trig_interpolate(c, n, 2, z) - f(z[0], z[1])), 0.0, 1e-12);
}

}  // namespace
}  // namespace leafindex
