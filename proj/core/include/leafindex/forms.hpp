// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "leafindex/density.hpp"
#include "leafindex/space.hpp"

namespace leafindex {

// Sorted index subsets of {0..r-1} with q elements, in lexicographic order.
const std::vector<std::vector<int>>& index_subsets(int r, int q);
int subset_position(int r, const std::vector<int>& sorted);

// A leafwise q-form: comp[x][I] samples the dz_I coefficient on the fiber grid.
struct FoliatedForm {
  int degree = 0;
  int dim = 0;
  std::vector<std::vector<VecC>> comp;
  bool invariant = false;

  static FoliatedForm zero(const FiberedGSpace& space, int degree);
  // A 0-form from one field per base point.
  static FoliatedForm function(const FiberedGSpace& space, const ZField& f);
  int num_components() const { return static_cast<int>(comp.empty() ? 0 : comp[0].size()); }
  VecC& at(int x, const std::vector<int>& I) { return comp[x][subset_position(dim, I)]; }
  const VecC& at(int x, const std::vector<int>& I) const { return comp[x][subset_position(dim, I)]; }

  FoliatedForm& operator+=(const FoliatedForm& o);
  FoliatedForm operator*(cplx s) const;
  double max_abs() const;
};

FoliatedForm operator+(FoliatedForm a, const FoliatedForm& b);
FoliatedForm operator-(FoliatedForm a, const FoliatedForm& b);

FoliatedForm d_leafwise(const FiberedGSpace& space, const FoliatedForm& w);
FoliatedForm wedge(const FoliatedForm& a, const FoliatedForm& b);

// psi_g^* of a form over s(g), as a form over t(g).
std::vector<VecC> pullback_form(const FiberedGSpace& space, int g, const FoliatedForm& w);

// Haar average over arrows landing at each base point:
// (P w)_x = |{k : t(k) = x}|^-1 sum_k psi_k^* w_{s(k)}.
FoliatedForm invariant_project(const FiberedGSpace& space, const FoliatedForm& w);

double invariance_defect(const FiberedGSpace& space, const FoliatedForm& w);

// Sets the invariant flag when the defect is within tol; throws otherwise.
FoliatedForm mark_invariant(const FiberedGSpace& space, FoliatedForm w, double tol);

// sum_x w_x Omega_x sum_z h^r c(z) alpha_{0..r-1}(z) for an invariant top form.
cplx integrate_invariant(const FiberedGSpace& space, const FoliatedForm& alpha, const CutoffDensity& c,
                         const TransversalDensity& omega, double tol = 1e-8);

// Dimensions of invariant leafwise cohomology in every degree, restricted to
// Fourier modes |nu_i| <= band (needs grid > 2 band).
std::vector<int> invariant_cohomology_ranks(const FiberedGSpace& space, int band);

}  // namespace leafindex
