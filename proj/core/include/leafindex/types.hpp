// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace leafindex {

using cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;

// Scalar field on Z: one grid vector per base point.
using ZField = std::vector<VecC>;
using ZFieldR = std::vector<VecR>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr cplx kI{0.0, 1.0};

}  // namespace leafindex
