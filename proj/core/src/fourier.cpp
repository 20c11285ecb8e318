// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/fourier.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

long ipow(int n, int r) {
  long p = 1;
  for (int i = 0; i < r; ++i) p *= n;
  return p;
}

// In-place transform of every line along `axis`; forward is unnormalised.
void transform_axis(std::vector<cplx>& data, const std::vector<int>& dims, int axis, bool forward) {
  const int n = dims[axis];
  long stride = 1;
  for (size_t a = axis + 1; a < dims.size(); ++a) stride *= dims[a];
  long outer = 1;
  for (int a = 0; a < axis; ++a) outer *= dims[a];
  Eigen::FFT<double> fft;
  std::vector<cplx> line(n), res(n);
  for (long o = 0; o < outer; ++o)
    for (long i = 0; i < stride; ++i) {
      long base = o * n * stride + i;
      for (int j = 0; j < n; ++j) line[j] = data[base + j * stride];
      if (forward)
        fft.fwd(res, line);
      else
        fft.inv(res, line);
      for (int j = 0; j < n; ++j) data[base + j * stride] = res[j];
    }
}

}  // namespace

int dft_frequency(int j, int n) { return j <= n / 2 ? j : j - n; }

VecC grid_to_coefficients(const VecC& f, int n, int r) {
  std::vector<cplx> data(f.data(), f.data() + f.size());
  std::vector<int> dims(r, n);
  for (int a = 0; a < r; ++a) transform_axis(data, dims, a, true);
  VecC c(f.size());
  const double scale = 1.0 / static_cast<double>(ipow(n, r));
  for (long i = 0; i < c.size(); ++i) c[i] = data[i] * scale;
  return c;
}

VecC coefficients_to_grid(const VecC& c, int n, int r) {
  std::vector<cplx> data(c.data(), c.data() + c.size());
  std::vector<int> dims(r, n);
  // Eigen's inverse divides by n; undo that per axis.
  for (int a = 0; a < r; ++a) transform_axis(data, dims, a, false);
  VecC f(c.size());
  const double scale = static_cast<double>(ipow(n, r));
  for (long i = 0; i < f.size(); ++i) f[i] = data[i] * scale;
  return f;
}

VecC spectral_derivative(const VecC& f, int n, int r, int axis) {
  VecC out(f.size());
  spectral_derivative_axis(f.data(), out.data(), std::vector<int>(r, n), axis, 1.0);
  return out;
}

void spectral_derivative_axis(const cplx* in, cplx* out, const std::vector<int>& dims, int axis,
                              double period) {
  const int n = dims[axis];
  long stride = 1;
  for (size_t a = axis + 1; a < dims.size(); ++a) stride *= dims[a];
  long outer = 1;
  for (int a = 0; a < axis; ++a) outer *= dims[a];
  Eigen::FFT<double> fft;
  std::vector<cplx> line(n), spec(n);
  std::vector<cplx> factor(n);
  for (int j = 0; j < n; ++j) {
    int k = dft_frequency(j, n);
    if (n % 2 == 0 && j == n / 2) k = 0;
    factor[j] = cplx(0.0, 2.0 * kPi * k / period);
  }
  for (long o = 0; o < outer; ++o)
    for (long i = 0; i < stride; ++i) {
      long base = o * n * stride + i;
      for (int j = 0; j < n; ++j) line[j] = in[base + j * stride];
      fft.fwd(spec, line);
      for (int j = 0; j < n; ++j) spec[j] *= factor[j];
      fft.inv(line, spec);
      for (int j = 0; j < n; ++j) out[base + j * stride] = line[j];
    }
}

cplx trig_interpolate(const VecC& coefficients, int n, int r, const double* z) {
  if (coefficients.size() != ipow(n, r)) fail(ErrorKind::internal, "trig_interpolate: size mismatch");
  cplx acc = 0.0;
  std::vector<int> idx(r, 0);
  for (long flat = 0; flat < coefficients.size(); ++flat) {
    long rem = flat;
    for (int a = r - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % n);
      rem /= n;
    }
    // Split the Nyquist slot over +-n/2 along each affected axis.
    int nyquist_axes = 0;
    for (int a = 0; a < r; ++a)
      if (n % 2 == 0 && idx[a] == n / 2) ++nyquist_axes;
    const int variants = 1 << nyquist_axes;
    cplx term = 0.0;
    for (int v = 0; v < variants; ++v) {
      double phase = 0.0;
      int bit = 0;
      for (int a = 0; a < r; ++a) {
        int k = dft_frequency(idx[a], n);
        if (n % 2 == 0 && idx[a] == n / 2) {
          if ((v >> bit) & 1) k = -k;
          ++bit;
        }
        phase += k * z[a];
      }
      term += std::exp(cplx(0.0, 2.0 * kPi * phase));
    }
    acc += coefficients[flat] * term / static_cast<double>(variants);
  }
  return acc;
}

}  // namespace leafindex
