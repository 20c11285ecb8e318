// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/forms.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "leafindex/error.hpp"
#include "leafindex/fourier.hpp"

namespace leafindex {

namespace {

std::vector<std::vector<int>> make_subsets(int r, int q) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == q) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < r; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Sign of the permutation sorting the concatenation of two disjoint sorted sets.
int merge_sign(const std::vector<int>& a, const std::vector<int>& b) {
  int inversions = 0;
  for (int x : a)
    for (int y : b)
      if (x > y) ++inversions;
  return inversions % 2 ? -1 : 1;
}

long long minor_det(const Eigen::MatrixXi& A, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int q = static_cast<int>(rows.size());
  if (q == 0) return 1;
  Eigen::MatrixXd m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = A(rows[i], cols[j]);
  return std::llround(m.determinant());
}

void check_shape(const FiberedGSpace& space, const FoliatedForm& w) {
  if (w.dim != space.dim() || static_cast<int>(w.comp.size()) != space.num_base())
    fail(ErrorKind::validation, "form: shape does not match the space");
}

}  // namespace

const std::vector<std::vector<int>>& index_subsets(int r, int q) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({r, q});
  if (it == cache.end()) it = cache.emplace(std::make_pair(r, q), make_subsets(r, q)).first;
  return it->second;
}

int subset_position(int r, const std::vector<int>& sorted) {
  const auto& all = index_subsets(r, static_cast<int>(sorted.size()));
  auto it = std::lower_bound(all.begin(), all.end(), sorted);
  if (it == all.end() || *it != sorted) fail(ErrorKind::internal, "form: index set not sorted or out of range");
  return static_cast<int>(it - all.begin());
}

FoliatedForm FoliatedForm::zero(const FiberedGSpace& space, int degree) {
  if (degree < 0 || degree > space.dim()) fail(ErrorKind::validation, "form: degree out of range");
  FoliatedForm w;
  w.degree = degree;
  w.dim = space.dim();
  const int nc = static_cast<int>(index_subsets(w.dim, degree).size());
  w.comp.assign(space.num_base(), std::vector<VecC>(nc, VecC::Zero(space.num_grid())));
  return w;
}

FoliatedForm FoliatedForm::function(const FiberedGSpace& space, const ZField& f) {
  FoliatedForm w = zero(space, 0);
  if (static_cast<int>(f.size()) != space.num_base()) fail(ErrorKind::validation, "form: one field per base point");
  for (int x = 0; x < space.num_base(); ++x) {
    if (f[x].size() != space.num_grid()) fail(ErrorKind::validation, "form: field has wrong grid size");
    w.comp[x][0] = f[x];
  }
  return w;
}

FoliatedForm& FoliatedForm::operator+=(const FoliatedForm& o) {
  if (o.degree != degree || o.comp.size() != comp.size()) fail(ErrorKind::validation, "form: adding mismatched forms");
  for (size_t x = 0; x < comp.size(); ++x)
    for (size_t i = 0; i < comp[x].size(); ++i) comp[x][i] += o.comp[x][i];
  invariant = invariant && o.invariant;
  return *this;
}

FoliatedForm FoliatedForm::operator*(cplx s) const {
  FoliatedForm out = *this;
  for (auto& cx : out.comp)
    for (auto& v : cx) v *= s;
  return out;
}

double FoliatedForm::max_abs() const {
  double m = 0.0;
  for (const auto& cx : comp)
    for (const auto& v : cx)
      if (v.size()) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

FoliatedForm operator+(FoliatedForm a, const FoliatedForm& b) { return a += b; }
FoliatedForm operator-(FoliatedForm a, const FoliatedForm& b) { return a += b * cplx(-1.0); }

FoliatedForm d_leafwise(const FiberedGSpace& space, const FoliatedForm& w) {
  check_shape(space, w);
  const int r = space.dim(), n = space.fiber().grid;
  if (w.degree >= r) fail(ErrorKind::validation, "d_leafwise: input already has top degree");
  FoliatedForm out = FoliatedForm::zero(space, w.degree + 1);
  const auto& src = index_subsets(r, w.degree);
  for (int x = 0; x < space.num_base(); ++x)
    for (size_t s = 0; s < src.size(); ++s) {
      for (int a = 0; a < r; ++a) {
        if (std::find(src[s].begin(), src[s].end(), a) != src[s].end()) continue;
        std::vector<int> I = src[s];
        I.push_back(a);
        std::sort(I.begin(), I.end());
        // d(f dz_J) = sum_a (d_a f) dz_a ^ dz_J.
        int sign = merge_sign({a}, src[s]);
        out.comp[x][subset_position(r, I)] += static_cast<double>(sign) * spectral_derivative(w.comp[x][s], n, r, a);
      }
    }
  out.invariant = w.invariant;
  return out;
}

FoliatedForm wedge(const FoliatedForm& a, const FoliatedForm& b) {
  if (a.dim != b.dim || a.comp.size() != b.comp.size()) fail(ErrorKind::validation, "wedge: mismatched forms");
  const int r = a.dim;
  FoliatedForm out;
  out.dim = r;
  out.degree = a.degree + b.degree;
  const auto& ia = index_subsets(r, a.degree);
  const auto& ib = index_subsets(r, b.degree);
  const int npts = static_cast<int>(a.comp[0][0].size());
  out.comp.assign(a.comp.size(),
                  std::vector<VecC>(index_subsets(r, std::min(out.degree, r)).size(), VecC::Zero(npts)));
  if (out.degree > r) {
    out.comp.assign(a.comp.size(), {});
    return out;
  }
  for (size_t x = 0; x < a.comp.size(); ++x)
    for (size_t i = 0; i < ia.size(); ++i)
      for (size_t j = 0; j < ib.size(); ++j) {
        std::vector<int> I = ia[i];
        bool disjoint = true;
        for (int v : ib[j])
          if (std::find(I.begin(), I.end(), v) != I.end()) disjoint = false;
        if (!disjoint) continue;
        I.insert(I.end(), ib[j].begin(), ib[j].end());
        std::sort(I.begin(), I.end());
        out.comp[x][subset_position(r, I)] +=
            static_cast<double>(merge_sign(ia[i], ib[j])) * a.comp[x][i].cwiseProduct(b.comp[x][j]);
      }
  out.invariant = a.invariant && b.invariant;
  return out;
}

std::vector<VecC> pullback_form(const FiberedGSpace& space, int g, const FoliatedForm& w) {
  const int r = space.dim(), s = space.groupoid().source(g);
  const auto& sets = index_subsets(r, w.degree);
  const Eigen::MatrixXi& A = space.action(g).A;
  std::vector<VecC> pulled(sets.size());
  for (size_t J = 0; J < sets.size(); ++J) pulled[J] = space.pullback(g, w.comp[s][J]);
  // psi^* dz_J = sum_I det A[J, I] dz_I.
  std::vector<VecC> out(sets.size(), VecC::Zero(space.num_grid()));
  for (size_t I = 0; I < sets.size(); ++I)
    for (size_t J = 0; J < sets.size(); ++J) {
      long long m = minor_det(A, sets[J], sets[I]);
      if (m != 0) out[I] += static_cast<double>(m) * pulled[J];
    }
  return out;
}

FoliatedForm invariant_project(const FiberedGSpace& space, const FoliatedForm& w) {
  check_shape(space, w);
  const auto& G = space.groupoid();
  FoliatedForm out = FoliatedForm::zero(space, w.degree);
  for (int x = 0; x < space.num_base(); ++x) {
    auto arrows = G.with_target(x);
    for (int k : arrows) {
      auto p = pullback_form(space, k, w);
      for (size_t I = 0; I < p.size(); ++I) out.comp[x][I] += p[I];
    }
    for (auto& v : out.comp[x]) v /= static_cast<double>(arrows.size());
  }
  out.invariant = true;
  return out;
}

double invariance_defect(const FiberedGSpace& space, const FoliatedForm& w) {
  check_shape(space, w);
  const auto& G = space.groupoid();
  double worst = 0.0;
  for (int g = 0; g < G.num_arrows(); ++g) {
    auto p = pullback_form(space, g, w);
    for (size_t I = 0; I < p.size(); ++I)
      worst = std::max(worst, (p[I] - w.comp[G.target(g)][I]).cwiseAbs().maxCoeff());
  }
  return worst;
}

FoliatedForm mark_invariant(const FiberedGSpace& space, FoliatedForm w, double tol) {
  double def = invariance_defect(space, w);
  if (def > tol) fail(ErrorKind::validation, fmt::format("form: invariance defect {:.3e} exceeds {:.1e}", def, tol));
  w.invariant = true;
  return w;
}

cplx integrate_invariant(const FiberedGSpace& space, const FoliatedForm& alpha, const CutoffDensity& c,
                         const TransversalDensity& omega, double tol) {
  check_shape(space, alpha);
  if (alpha.degree != space.dim()) fail(ErrorKind::validation, "integrate_invariant: form is not of top degree");
  if (!alpha.invariant) fail(ErrorKind::validation, "integrate_invariant: form is not flagged invariant");
  double def = invariance_defect(space, alpha);
  if (def > tol) fail(ErrorKind::validation, fmt::format("integrate_invariant: invariance defect {:.3e}", def));
  const auto& base = space.groupoid().base();
  cplx acc = 0.0;
  for (int x = 0; x < space.num_base(); ++x)
    acc += omega.measure(base, x) * space.fiber().cell_volume() * alpha.comp[x][0].dot(c.values[x].cast<cplx>());
  // dot() conjugates its first argument.
  return std::conj(acc);
}

std::vector<int> invariant_cohomology_ranks(const FiberedGSpace& space, int band) {
  const int r = space.dim(), n = space.fiber().grid;
  if (n <= 2 * band) fail(ErrorKind::validation, "cohomology: grid must exceed twice the band");
  // Band-limited basis of q-forms over all base points: e_nu dz_I.
  std::vector<std::vector<int>> modes;
  {
    std::vector<int> nu(r, -band);
    while (true) {
      modes.push_back(nu);
      int a = r - 1;
      while (a >= 0 && nu[a] == band) nu[a--] = -band;
      if (a < 0) break;
      ++nu[a];
    }
  }
  const int nb = space.num_base(), np = space.num_grid();
  std::vector<double> z(r);
  MatC E(np, modes.size());
  for (int j = 0; j < np; ++j) {
    space.fiber().point(j, z.data());
    for (size_t m = 0; m < modes.size(); ++m) {
      double ph = 0.0;
      for (int a = 0; a < r; ++a) ph += modes[m][a] * z[a];
      E(j, m) = std::polar(1.0, 2.0 * kPi * ph);
    }
  }
  auto flatten = [&](const FoliatedForm& w) {
    VecC v(static_cast<Eigen::Index>(nb) * w.num_components() * np);
    Eigen::Index k = 0;
    for (int x = 0; x < nb; ++x)
      for (const auto& c : w.comp[x]) {
        v.segment(k, np) = c;
        k += np;
      }
    return v;
  };
  // Orthonormal bases of the invariant band-limited subspaces.
  std::vector<MatC> basis(r + 1);
  for (int q = 0; q <= r; ++q) {
    const int nc = static_cast<int>(index_subsets(r, q).size());
    MatC images(static_cast<Eigen::Index>(nb) * nc * np, static_cast<Eigen::Index>(nb) * nc * modes.size());
    Eigen::Index col = 0;
    for (int x = 0; x < nb; ++x)
      for (int I = 0; I < nc; ++I)
        for (size_t m = 0; m < modes.size(); ++m) {
          FoliatedForm w = FoliatedForm::zero(space, q);
          w.comp[x][I] = E.col(m);
          images.col(col++) = flatten(invariant_project(space, w));
        }
    Eigen::BDCSVD<MatC> svd(images, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    int rank = 0;
    while (rank < s.size() && s[rank] > 1e-8 * s[0]) ++rank;
    basis[q] = svd.matrixU().leftCols(rank);
  }
  auto unflatten = [&](const VecC& v, int q) {
    FoliatedForm w = FoliatedForm::zero(space, q);
    Eigen::Index k = 0;
    for (int x = 0; x < nb; ++x)
      for (auto& c : w.comp[x]) {
        c = v.segment(k, np);
        k += np;
      }
    return w;
  };
  std::vector<int> dranks(r + 1, 0);
  for (int q = 0; q < r; ++q) {
    if (basis[q].cols() == 0 || basis[q + 1].cols() == 0) continue;
    MatC D(basis[q + 1].cols(), basis[q].cols());
    for (Eigen::Index c = 0; c < basis[q].cols(); ++c)
      D.col(c) = basis[q + 1].adjoint() * flatten(d_leafwise(space, unflatten(basis[q].col(c), q)));
    Eigen::BDCSVD<MatC> svd(D);
    const auto& s = svd.singularValues();
    int rank = 0;
    while (rank < s.size() && s[0] > 0 && s[rank] > 1e-8 * s[0]) ++rank;
    dranks[q] = rank;
  }
  std::vector<int> h(r + 1);
  for (int q = 0; q <= r; ++q)
    h[q] = static_cast<int>(basis[q].cols()) - dranks[q] - (q > 0 ? dranks[q - 1] : 0);
  return h;
}

}  // namespace leafindex
