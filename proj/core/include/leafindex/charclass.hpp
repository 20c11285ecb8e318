// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "leafindex/symbol.hpp"
#include "leafindex/types.hpp"

namespace leafindex {

// Element of the exterior algebra on `gens` generators, indexed by bitmask.
class ExtForm {
 public:
  explicit ExtForm(int gens = 0) : gens_(gens), c_(std::size_t{1} << gens, cplx(0.0)) {}
  static ExtForm scalar(int gens, cplx v);
  static ExtForm generator(int gens, int i);

  int generators() const { return gens_; }
  cplx& operator[](unsigned mask) { return c_[mask]; }
  cplx operator[](unsigned mask) const { return c_[mask]; }
  ExtForm operator*(const ExtForm& o) const;  // wedge product
  ExtForm operator+(const ExtForm& o) const;
  ExtForm operator-(const ExtForm& o) const;
  ExtForm operator*(cplx s) const;
  ExtForm degree_part(int q) const;
  double max_abs() const;

 private:
  int gens_;
  std::vector<cplx> c_;
};

// Sign of e_A ^ e_B relative to e_{A|B}; 0 when A and B overlap.
int wedge_sign(unsigned a, unsigned b);

// n x n matrix of forms, stored as one matrix per basis monomial.
struct ExtMatrix {
  int n = 0, gens = 0;
  std::vector<MatC> part;  // part[mask]

  ExtMatrix(int n, int gens);
  static ExtMatrix scalar(const MatC& m, int gens);
  ExtMatrix operator*(const ExtMatrix& o) const;
  ExtMatrix operator+(const ExtMatrix& o) const;
  ExtMatrix operator-(const ExtMatrix& o) const;
  ExtMatrix operator*(cplx s) const;
  ExtForm trace() const;
};

// Coefficients a_j of x^{2j}, j = 0..terms-1, in (x/2)/sinh(x/2), from the
// Bernoulli expansion of its logarithm.
std::vector<double> a_hat_series(int terms);

// prod_j (x_j/2)/sinh(x_j/2) = exp(1/2 sum_k l_k tr R^{2k}), l_k the
// coefficients of the logarithm of the series above, for a curvature matrix
// R whose eigenvalues come in pairs +-x_j (real bundles).  Truncated at form
// degree `truncation`.
ExtForm a_hat_form(const ExtMatrix& R, int truncation);

// Tensor grid on fiber x compactified cotangent disc: z axes (nz each,
// periodic), radius rho in [0,1] (Gauss-Legendre), and angle (nang, period
// 2 pi) for r = 2 or the two branches xi = +-1 for r = 1.  rho = 1 is the
// boundary where the symbol sits.  Points: ((zflat * nrho) + i) * nang + a.
struct CotangentGrid {
  int r = 2, nz = 16, nrho = 16, nang = 16;
  std::vector<double> rho, wrho;
  MatR drho;  // differentiation matrix on the rho nodes

  static CotangentGrid make(int r, int nz, int nrho, int nang);
  int num_z() const;
  int num_points() const { return num_z() * nrho * nang; }
  int generators() const { return r + (r == 2 ? 2 : 1); }
  void z_point(int zflat, double* z) const;
  void direction(int a, double* dir) const;
  double angle_weight(int a) const;  // 2 pi / nang, or +-1 on the branches
};

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre01(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct ProjectorField {
  CotangentGrid grid;
  int m = 0;
  std::vector<MatC> p;
};

// Unitary part of the symbol model, u = s (s^* s)^{-1/2}.
MatC polar_unitary(const MatC& s);

// p = [[c^2, c s u^*], [c s u, s^2]] with c = cos(pi rho / 2), s = sin(pi rho / 2):
// diag(1, 0) at the centre, e = diag(0, 1) on the boundary circle.
ProjectorField clutching_projector(const Symbol& a, int x, const CotangentGrid& grid);
ProjectorField constant_projector(const CotangentGrid& grid, const MatC& p);
ProjectorField direct_sum(const ProjectorField& a, const ProjectorField& b);

// Extra connection form: A[axis](z) for the z axes; empty means p o d o p.
struct ConnectionForm {
  std::vector<std::function<MatC(const double* z)>> A;
};

struct CharClassForm {
  enum class Kind { a_hat, chern };
  Kind kind = Kind::chern;
  CotangentGrid grid;
  std::vector<ExtForm> values;

  ExtForm at(int point) const { return values[point]; }
  double max_abs_degree(int q) const;
};

inline constexpr cplx kChernKappa{0.0, 0.5 / kPi};  // i / (2 pi)

// tr(p exp(kappa Theta)), Theta the curvature of p (d + A) p; minus `subtract_rank`
// in degree 0 (pass rank e for the difference class).
CharClassForm chern_character_form(const ProjectorField& p, const ConnectionForm& A = {}, double subtract_rank = 0.0);

// max |d omega| over the grid (spectral in z and angle, Legendre in rho).
double closedness_defect(const CharClassForm& w);

// Integral over the cotangent directions: by_degree[q] is indexed by the
// z-subsets of size q and sampled on the nz grid.
struct FiberIntegral {
  int r = 2, nz = 0;
  std::vector<std::vector<VecC>> by_degree;
};
FiberIntegral pushforward(const CharClassForm& w);

// Same integral for ch(sigma) - rank e built directly from the clutching of the
// symbol model, computing only the requested degree.
FiberIntegral pushforward_ch(const Symbol& a, int x, int r, int nz, int nrho, int nang, int degree);

// Resample periodic data from an nz grid to an n grid keeping |k| <= n/2
// (Nyquist modes split evenly).
VecC low_pass_resample(const VecC& fine, int nz, int n, int r);

}  // namespace leafindex
