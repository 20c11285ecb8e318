// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/types.hpp"

namespace leafindex {

// Spectral tools on the uniform grid of the r-torus with n nodes per axis.
// Grid vectors are stored with the last axis fastest; e_k(z) = exp(2 pi i k.z).

// Signed frequency of DFT slot j, in (-n/2, n/2].
int dft_frequency(int j, int n);

// Fourier coefficients c_k with f(z_j) = sum_k c_k e_k(z_j).
VecC grid_to_coefficients(const VecC& f, int n, int r);
VecC coefficients_to_grid(const VecC& c, int n, int r);

// d/dz_axis of the trigonometric interpolant (the Nyquist mode is dropped).
VecC spectral_derivative(const VecC& f, int n, int r, int axis);

// Evaluate the trigonometric interpolant at an arbitrary point; the Nyquist
// mode is split symmetrically so real data stay real.
cplx trig_interpolate(const VecC& coefficients, int n, int r, const double* z);

// Derivative along `axis` of periodic samples on a row-major grid with the
// given extents (last fastest) and the given period along that axis.
void spectral_derivative_axis(const cplx* in, cplx* out, const std::vector<int>& dims, int axis,
                              double period);

}  // namespace leafindex
