// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/charclass.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <mutex>

#include <Eigen/SVD>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

#include "leafindex/error.hpp"
#include "leafindex/forms.hpp"
#include "leafindex/fourier.hpp"

namespace leafindex {

int wedge_sign(unsigned a, unsigned b);

namespace {

struct WedgePair {
  unsigned a, b;
  int sign;
};

// All (A, B) with A & B == 0 for the given number of generators.
const std::vector<WedgePair>& wedge_pairs(int gens) {
  constexpr int kMaxGens = 12;
  static std::mutex mu;
  static std::array<std::vector<WedgePair>, kMaxGens + 1> cache;
  if (gens < 0 || gens > kMaxGens) fail(ErrorKind::validation, "exterior algebra: too many generators");
  std::lock_guard<std::mutex> lock(mu);
  auto& out = cache[gens];
  if (out.empty()) {
    const unsigned full = 1u << gens;
    for (unsigned a = 0; a < full; ++a)
      for (unsigned b = 0; b < full; ++b)
        if ((a & b) == 0) out.push_back({a, b, wedge_sign(a, b)});
  }
  return out;
}

}  // namespace

int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  // Count pairs i in a, j in b with i > j.
  int inversions = 0;
  for (unsigned bb = b; bb; bb &= bb - 1) {
    unsigned j = static_cast<unsigned>(std::countr_zero(bb));
    inversions += std::popcount(a >> (j + 1));
  }
  return inversions % 2 ? -1 : 1;
}

ExtForm ExtForm::scalar(int gens, cplx v) {
  ExtForm f(gens);
  f.c_[0] = v;
  return f;
}

ExtForm ExtForm::generator(int gens, int i) {
  ExtForm f(gens);
  f.c_[1u << i] = 1.0;
  return f;
}

ExtForm ExtForm::operator*(const ExtForm& o) const {
  ExtForm out(gens_);
  for (const WedgePair& p : wedge_pairs(gens_)) {
    if (c_[p.a] == 0.0 || o.c_[p.b] == 0.0) continue;
    out.c_[p.a | p.b] += static_cast<double>(p.sign) * c_[p.a] * o.c_[p.b];
  }
  return out;
}

ExtForm ExtForm::operator+(const ExtForm& o) const {
  ExtForm out = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] += o.c_[i];
  return out;
}

ExtForm ExtForm::operator-(const ExtForm& o) const {
  ExtForm out = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] -= o.c_[i];
  return out;
}

ExtForm ExtForm::operator*(cplx s) const {
  ExtForm out = *this;
  for (auto& v : out.c_) v *= s;
  return out;
}

ExtForm ExtForm::degree_part(int q) const {
  ExtForm out(gens_);
  for (unsigned m = 0; m < c_.size(); ++m)
    if (std::popcount(m) == q) out.c_[m] = c_[m];
  return out;
}

double ExtForm::max_abs() const {
  double m = 0.0;
  for (const cplx& v : c_) m = std::max(m, std::abs(v));
  return m;
}

ExtMatrix::ExtMatrix(int n, int gens) : n(n), gens(gens), part(std::size_t{1} << gens, MatC::Zero(n, n)) {}

ExtMatrix ExtMatrix::scalar(const MatC& m, int gens) {
  ExtMatrix out(static_cast<int>(m.rows()), gens);
  out.part[0] = m;
  return out;
}

ExtMatrix ExtMatrix::operator*(const ExtMatrix& o) const {
  ExtMatrix out(n, gens);
  std::vector<char> live_a(part.size()), live_b(part.size());
  for (std::size_t m = 0; m < part.size(); ++m) {
    live_a[m] = !part[m].isZero(0.0);
    live_b[m] = !o.part[m].isZero(0.0);
  }
  for (const WedgePair& p : wedge_pairs(gens)) {
    if (!live_a[p.a] || !live_b[p.b]) continue;
    if (p.sign > 0)
      out.part[p.a | p.b].noalias() += part[p.a] * o.part[p.b];
    else
      out.part[p.a | p.b].noalias() -= part[p.a] * o.part[p.b];
  }
  return out;
}

ExtMatrix ExtMatrix::operator+(const ExtMatrix& o) const {
  ExtMatrix out = *this;
  for (std::size_t m = 0; m < part.size(); ++m) out.part[m] += o.part[m];
  return out;
}

ExtMatrix ExtMatrix::operator-(const ExtMatrix& o) const {
  ExtMatrix out = *this;
  for (std::size_t m = 0; m < part.size(); ++m) out.part[m] -= o.part[m];
  return out;
}

ExtMatrix ExtMatrix::operator*(cplx s) const {
  ExtMatrix out = *this;
  for (auto& m : out.part) m *= s;
  return out;
}

ExtForm ExtMatrix::trace() const {
  ExtForm f(gens);
  for (unsigned m = 0; m < part.size(); ++m) f[m] = part[m].trace();
  return f;
}

std::vector<double> a_hat_series(int terms) {
  // log((x/2)/sinh(x/2)) = sum_k l_k x^{2k}, l_k = -B_2k / (2k (2k)!).
  std::vector<double> l(terms, 0.0), a(terms, 0.0);
  double fact = 1.0;
  for (int k = 1; k < terms; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    l[k] = -boost::math::bernoulli_b2n<double>(k) / (2.0 * k * fact);
  }
  if (terms > 0) a[0] = 1.0;
  for (int n = 1; n < terms; ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += k * l[k] * a[n - k];
    a[n] = acc / n;
  }
  return a;
}

namespace {

// exp of a form: e^{f_0} times the (finite) series of the nilpotent part.
ExtForm form_exp(const ExtForm& f) {
  const int gens = f.generators();
  ExtForm nil = f;
  nil[0] = 0.0;
  ExtForm sum = ExtForm::scalar(gens, 1.0), term = sum;
  for (int k = 1; k <= gens; ++k) {
    term = term * nil * (1.0 / k);
    sum = sum + term;
  }
  return sum * std::exp(f[0]);
}

}  // namespace

ExtForm a_hat_form(const ExtMatrix& R, int truncation) {
  const int gens = R.gens;
  const int kmax = std::max(1, gens / 4 + 1);
  double fact = 1.0;
  ExtForm exponent(gens);
  ExtMatrix R2 = R * R, power = R2;
  for (int k = 1; k <= kmax; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double lk = -boost::math::bernoulli_b2n<double>(k) / (2.0 * k * fact);
    exponent = exponent + power.trace() * (0.5 * lk);
    power = power * R2;
  }
  ExtForm full = form_exp(exponent), out(gens);
  for (int q = 0; q <= std::min(truncation, gens); ++q) out = out + full.degree_part(q);
  return out;
}

void gauss_legendre01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) fail(ErrorKind::validation, "gauss_legendre: need at least one node");
  std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (double z : pos) {
    x.push_back(z);
    if (z > 0.0) x.push_back(-z);
  }
  std::sort(x.begin(), x.end());
  nodes.resize(x.size());
  weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dp = boost::math::legendre_p_prime(n, x[i]);
    nodes[i] = 0.5 * (x[i] + 1.0);
    weights[i] = 1.0 / ((1.0 - x[i] * x[i]) * dp * dp);  // half of 2/((1-x^2) P'^2)
  }
}

CotangentGrid CotangentGrid::make(int r, int nz, int nrho, int nang) {
  if (r != 1 && r != 2) fail(ErrorKind::validation, fmt::format("cotangent grid: fiber dimension {} (1 or 2 supported)", r));
  if (nz < 4 || nrho < 2) fail(ErrorKind::validation, "cotangent grid: too few nodes");
  if (r == 1 && nang != 2) fail(ErrorKind::validation, "cotangent grid: r = 1 uses the two branches xi = +-1");
  if (r == 2 && nang < 4) fail(ErrorKind::validation, "cotangent grid: too few angles");
  CotangentGrid g;
  g.r = r;
  g.nz = nz;
  g.nrho = nrho;
  g.nang = nang;
  gauss_legendre01(nrho, g.rho, g.wrho);
  // Barycentric differentiation on the Legendre nodes.
  std::vector<double> w(nrho, 1.0);
  for (int i = 0; i < nrho; ++i)
    for (int j = 0; j < nrho; ++j)
      if (i != j) w[i] /= g.rho[i] - g.rho[j];
  g.drho = MatR::Zero(nrho, nrho);
  for (int i = 0; i < nrho; ++i) {
    for (int j = 0; j < nrho; ++j)
      if (i != j) {
        g.drho(i, j) = (w[j] / w[i]) / (g.rho[i] - g.rho[j]);
        g.drho(i, i) -= g.drho(i, j);
      }
  }
  return g;
}

int CotangentGrid::num_z() const { return r == 1 ? nz : nz * nz; }

void CotangentGrid::z_point(int zflat, double* z) const {
  for (int a = r - 1; a >= 0; --a) {
    z[a] = static_cast<double>(zflat % nz) / nz;
    zflat /= nz;
  }
}

void CotangentGrid::direction(int a, double* dir) const {
  if (r == 1) {
    dir[0] = a == 0 ? 1.0 : -1.0;
    return;
  }
  const double phi = 2.0 * kPi * a / nang;
  dir[0] = std::cos(phi);
  dir[1] = std::sin(phi);
}

double CotangentGrid::angle_weight(int a) const {
  if (r == 1) return a == 0 ? 1.0 : -1.0;
  return 2.0 * kPi / nang;
}

MatC polar_unitary(const MatC& s) {
  if (s.rows() != s.cols()) fail(ErrorKind::validation, "polar part: symbol is not square");
  Eigen::JacobiSVD<MatC> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() <= 1e-12 * std::max(1.0, svd.singularValues().maxCoeff()))
    fail(ErrorKind::numerical, "polar part: singular model symbol");
  return svd.matrixU() * svd.matrixV().adjoint();
}

namespace {

MatC clutch(const MatC& u, double rho) {
  const int k = static_cast<int>(u.rows());
  const double c = std::cos(0.5 * kPi * rho), s = std::sin(0.5 * kPi * rho);
  MatC p(2 * k, 2 * k);
  p.topLeftCorner(k, k) = MatC::Identity(k, k) * (c * c);
  p.topRightCorner(k, k) = u.adjoint() * (c * s);
  p.bottomLeftCorner(k, k) = u * (c * s);
  p.bottomRightCorner(k, k) = MatC::Identity(k, k) * (s * s);
  return p;
}

// Unitary parts on the (z, angle) grid, stored [zflat * nang + a].
std::vector<MatC> boundary_unitaries(const Symbol& a, int x, const CotangentGrid& grid) {
  std::vector<MatC> u(static_cast<std::size_t>(grid.num_z()) * grid.nang);
  std::array<double, 2> z{}, dir{};
  for (int j = 0; j < grid.num_z(); ++j) {
    grid.z_point(j, z.data());
    for (int b = 0; b < grid.nang; ++b) {
      grid.direction(b, dir.data());
      u[static_cast<std::size_t>(j) * grid.nang + b] = polar_unitary(a.model_at(x, z.data(), dir.data()));
    }
  }
  return u;
}

std::vector<int> point_dims(const CotangentGrid& g) {
  std::vector<int> dims(g.r, g.nz);
  dims.push_back(g.nrho);
  dims.push_back(g.nang);
  return dims;
}

// Derivative of a scalar field on the cotangent grid along generator `gen`.
void derive(const CotangentGrid& g, const cplx* in, cplx* out, int gen) {
  const std::vector<int> dims = point_dims(g);
  if (gen < g.r) {
    spectral_derivative_axis(in, out, dims, gen, 1.0);
  } else if (gen == g.r + 1) {
    spectral_derivative_axis(in, out, dims, g.r + 1, 2.0 * kPi);
  } else {
    const int nz = g.num_z();
    for (int j = 0; j < nz; ++j)
      for (int a = 0; a < g.nang; ++a)
        for (int i = 0; i < g.nrho; ++i) {
          cplx acc = 0.0;
          for (int k = 0; k < g.nrho; ++k)
            acc += g.drho(i, k) * in[(static_cast<std::size_t>(j) * g.nrho + k) * g.nang + a];
          out[(static_cast<std::size_t>(j) * g.nrho + i) * g.nang + a] = acc;
        }
  }
}

}  // namespace

ProjectorField clutching_projector(const Symbol& a, int x, const CotangentGrid& grid) {
  if (a.rows != a.cols) fail(ErrorKind::validation, "clutching: symbol is not square");
  ProjectorField P;
  P.grid = grid;
  P.m = 2 * a.rows;
  P.p.resize(grid.num_points());
  auto u = boundary_unitaries(a, x, grid);
  for (int j = 0; j < grid.num_z(); ++j)
    for (int i = 0; i < grid.nrho; ++i)
      for (int b = 0; b < grid.nang; ++b)
        P.p[(static_cast<std::size_t>(j) * grid.nrho + i) * grid.nang + b] =
            clutch(u[static_cast<std::size_t>(j) * grid.nang + b], grid.rho[i]);
  return P;
}

ProjectorField constant_projector(const CotangentGrid& grid, const MatC& p) {
  ProjectorField P;
  P.grid = grid;
  P.m = static_cast<int>(p.rows());
  P.p.assign(grid.num_points(), p);
  return P;
}

ProjectorField direct_sum(const ProjectorField& a, const ProjectorField& b) {
  if (a.p.size() != b.p.size()) fail(ErrorKind::validation, "direct sum: grids differ");
  ProjectorField out;
  out.grid = a.grid;
  out.m = a.m + b.m;
  out.p.resize(a.p.size());
  for (std::size_t i = 0; i < a.p.size(); ++i) {
    out.p[i] = MatC::Zero(out.m, out.m);
    out.p[i].topLeftCorner(a.m, a.m) = a.p[i];
    out.p[i].bottomRightCorner(b.m, b.m) = b.p[i];
  }
  return out;
}

double CharClassForm::max_abs_degree(int q) const {
  double m = 0.0;
  for (const ExtForm& f : values) m = std::max(m, f.degree_part(q).max_abs());
  return m;
}

CharClassForm chern_character_form(const ProjectorField& P, const ConnectionForm& A, double subtract_rank) {
  const CotangentGrid& g = P.grid;
  const int gens = g.generators(), m = P.m, npts = g.num_points();
  if (!A.A.empty() && static_cast<int>(A.A.size()) != g.r)
    fail(ErrorKind::validation, "connection: one matrix per fiber axis is required");

  // dp along every generator, entry by entry.
  std::vector<std::vector<MatC>> dp(gens, std::vector<MatC>(npts, MatC::Zero(m, m)));
  std::vector<cplx> in(npts), out(npts);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < npts; ++k) in[k] = P.p[k](i, j);
      for (int gen = 0; gen < gens; ++gen) {
        derive(g, in.data(), out.data(), gen);
        for (int k = 0; k < npts; ++k) dp[gen][k](i, j) = out[k];
      }
    }

  // Connection matrices and their z-derivatives on the z grid.
  const int nzp = g.num_z();
  std::vector<std::vector<MatC>> Az, dAz;  // Az[a][zflat], dAz[a * r + b] = d_a A_b
  if (!A.A.empty()) {
    std::array<double, 2> z{};
    Az.assign(g.r, std::vector<MatC>(nzp));
    for (int a = 0; a < g.r; ++a)
      for (int j = 0; j < nzp; ++j) {
        g.z_point(j, z.data());
        Az[a][j] = A.A[a](z.data());
        if (Az[a][j].rows() != m || Az[a][j].cols() != m)
          fail(ErrorKind::validation, "connection: matrix size differs from the projector");
      }
    dAz.assign(g.r * g.r, std::vector<MatC>(nzp, MatC::Zero(m, m)));
    std::vector<int> dims(g.r, g.nz);
    std::vector<cplx> zin(nzp), zout(nzp);
    for (int b = 0; b < g.r; ++b)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          for (int k = 0; k < nzp; ++k) zin[k] = Az[b][k](i, j);
          for (int a = 0; a < g.r; ++a) {
            spectral_derivative_axis(zin.data(), zout.data(), dims, a, 1.0);
            for (int k = 0; k < nzp; ++k) dAz[a * g.r + b][k](i, j) = zout[k];
          }
        }
  }

  CharClassForm w;
  w.kind = CharClassForm::Kind::chern;
  w.grid = g;
  w.values.resize(npts);
  for (int k = 0; k < npts; ++k) {
    const int zflat = k / (g.nrho * g.nang);
    ExtMatrix p0 = ExtMatrix::scalar(P.p[k], gens);
    ExtMatrix d(m, gens);
    for (int gen = 0; gen < gens; ++gen) d.part[1u << gen] = dp[gen][k];
    ExtMatrix inner = d * d;
    if (!Az.empty()) {
      ExtMatrix Am(m, gens), dA(m, gens);
      for (int a = 0; a < g.r; ++a) Am.part[1u << a] = Az[a][zflat];
      for (int a = 0; a < g.r; ++a)
        for (int b = a + 1; b < g.r; ++b)
          dA.part[(1u << a) | (1u << b)] = dAz[a * g.r + b][zflat] - dAz[b * g.r + a][zflat];
      inner = inner + d * Am - Am * d + dA + Am * p0 * Am;
    }
    ExtMatrix theta = p0 * inner * p0 * kChernKappa;
    ExtMatrix sum = p0, term = p0;
    for (int q = 1; 2 * q <= gens; ++q) {
      term = term * theta * (1.0 / q);
      sum = sum + term;
    }
    w.values[k] = sum.trace();
    w.values[k][0] -= subtract_rank;
  }
  return w;
}

double closedness_defect(const CharClassForm& w) {
  const CotangentGrid& g = w.grid;
  const int gens = g.generators(), npts = g.num_points();
  const unsigned full = 1u << gens;
  std::vector<std::vector<cplx>> dw(full, std::vector<cplx>(npts, 0.0));
  std::vector<cplx> in(npts), out(npts);
  for (unsigned mask = 0; mask < full; ++mask)
    for (int gen = 0; gen < gens; ++gen) {
      if (mask & (1u << gen)) continue;
      for (int k = 0; k < npts; ++k) in[k] = w.values[k][mask];
      derive(g, in.data(), out.data(), gen);
      const double sign = wedge_sign(1u << gen, mask);
      for (int k = 0; k < npts; ++k) dw[mask | (1u << gen)][k] += sign * out[k];
    }
  double m = 0.0;
  for (const auto& f : dw)
    for (const cplx& v : f) m = std::max(m, std::abs(v));
  return m;
}

FiberIntegral pushforward(const CharClassForm& w) {
  const CotangentGrid& g = w.grid;
  FiberIntegral out;
  out.r = g.r;
  out.nz = g.nz;
  out.by_degree.resize(g.r + 1);
  unsigned fiber_bits = 1u << g.r;
  if (g.r == 2) fiber_bits |= 1u << (g.r + 1);
  for (int q = 0; q <= g.r; ++q)
    for (const auto& I : index_subsets(g.r, q)) {
      unsigned mask = fiber_bits;
      for (int a : I) mask |= 1u << a;
      VecC f = VecC::Zero(g.num_z());
      for (int j = 0; j < g.num_z(); ++j)
        for (int i = 0; i < g.nrho; ++i)
          for (int b = 0; b < g.nang; ++b)
            f[j] += g.wrho[i] * g.angle_weight(b) *
                    w.values[(static_cast<std::size_t>(j) * g.nrho + i) * g.nang + b][mask];
      out.by_degree[q].push_back(f);
    }
  return out;
}

namespace {

// Integrand of the fast pushforward for symbols of rank K (fixed-size math).
template <int K>
void accumulate_pushforward(const CotangentGrid& g, const std::vector<MatC>& u,
                            const std::vector<std::vector<MatC>>& du, int degree, VecC& f) {
  using Mk = Eigen::Matrix<cplx, K, K>;
  using Mm = Eigen::Matrix<cplx, 2 * K, 2 * K>;
  const int na = g.nang, r = g.r;
  const Mk I = Mk::Identity();
  auto off = [](const Mk& v, double scale) {
    Mm out = Mm::Zero();
    out.template topRightCorner<K, K>() = v.adjoint() * scale;
    out.template bottomLeftCorner<K, K>() = v * scale;
    return out;
  };
  for (int j = 0; j < g.num_z(); ++j)
    for (int b = 0; b < na; ++b) {
      const std::size_t q = static_cast<std::size_t>(j) * na + b;
      const Mk uq = u[q];
      Mk dz[3];
      for (std::size_t a = 0; a < du.size(); ++a) dz[a] = du[a][q];
      cplx acc = 0.0;
      for (int i = 0; i < g.nrho; ++i) {
        const double c = std::cos(0.5 * kPi * g.rho[i]), s = std::sin(0.5 * kPi * g.rho[i]);
        Mm p;
        p << I * (c * c), uq.adjoint() * (c * s), uq * (c * s), I * (s * s);
        Mm drho = off(uq, 0.5 * kPi * (c * c - s * s));
        drho.template topLeftCorner<K, K>() = I * (-kPi * c * s);
        drho.template bottomRightCorner<K, K>() = I * (kPi * c * s);
        auto F = [&](const Mm& da, const Mm& db) -> Mm {
          Mm t = da * db;
          t.noalias() -= db * da;
          Mm out;
          out.noalias() = p * t;
          return out;
        };
        cplx val;
        if (r == 1) {
          // Generators (z, rho).
          val = kChernKappa * F(off(dz[0], c * s), drho).trace();
        } else if (degree == 0) {
          val = kChernKappa * F(drho, off(dz[2], c * s)).trace();
        } else {
          // Generators (z1, z2, rho, phi).
          const Mm d0 = off(dz[0], c * s), d1 = off(dz[1], c * s), d3 = off(dz[2], c * s);
          const Mm F01 = F(d0, d1), F23 = F(drho, d3), F02 = F(d0, drho), F13 = F(d1, d3), F03 = F(d0, d3),
                   F12 = F(d1, drho);
          Mm t;
          t.noalias() = F01 * F23;
          t.noalias() -= F02 * F13;
          t.noalias() += F03 * F12;
          val = kChernKappa * kChernKappa * t.trace();
        }
        acc += g.wrho[i] * val;
      }
      f[j] += g.angle_weight(b) * acc;
    }
}

}  // namespace

FiberIntegral pushforward_ch(const Symbol& a, int x, int r, int nz, int nrho, int nang, int degree) {
  if (r == 1 && degree != 1) fail(ErrorKind::validation, "pushforward_ch: r = 1 carries only degree 1");
  if (r == 2 && degree != 0 && degree != 2)
    fail(ErrorKind::validation, "pushforward_ch: r = 2 carries degrees 0 and 2");
  if (a.rows < 1 || a.rows > 4) fail(ErrorKind::validation, "pushforward_ch: symbol rank must be 1..4");
  const CotangentGrid g = CotangentGrid::make(r, nz, nrho, r == 1 ? 2 : nang);
  const int k = a.rows, na = g.nang;
  auto u = boundary_unitaries(a, x, g);

  // du along the z axes and the angle, on the (z, angle) grid.
  const int ndir = r == 2 ? 3 : 1;
  std::vector<std::vector<MatC>> du(ndir, std::vector<MatC>(u.size(), MatC::Zero(k, k)));
  {
    std::vector<int> dims(r, nz);
    dims.push_back(na);
    std::vector<cplx> in(u.size()), out(u.size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        for (std::size_t q = 0; q < u.size(); ++q) in[q] = u[q](i, j);
        for (int dir = 0; dir < ndir; ++dir) {
          if (dir < r)
            spectral_derivative_axis(in.data(), out.data(), dims, dir, 1.0);
          else
            spectral_derivative_axis(in.data(), out.data(), dims, r, 2.0 * kPi);
          for (std::size_t q = 0; q < u.size(); ++q) du[dir][q](i, j) = out[q];
        }
      }
  }

  FiberIntegral res;
  res.r = r;
  res.nz = nz;
  res.by_degree.resize(r + 1);
  VecC f = VecC::Zero(g.num_z());
  switch (k) {
    case 1: accumulate_pushforward<1>(g, u, du, degree, f); break;
    case 2: accumulate_pushforward<2>(g, u, du, degree, f); break;
    case 3: accumulate_pushforward<3>(g, u, du, degree, f); break;
    default: accumulate_pushforward<4>(g, u, du, degree, f); break;
  }
  res.by_degree[degree].push_back(f);
  return res;
}

VecC low_pass_resample(const VecC& fine, int nz, int n, int r) {
  if (n > nz) fail(ErrorKind::validation, "low_pass_resample: target grid is finer than the source");
  VecC cf = grid_to_coefficients(fine, nz, r);
  long total = 1;
  for (int a = 0; a < r; ++a) total *= n;
  VecC cc = VecC::Zero(total);
  std::vector<int> idx(r);
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int a = r - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % n);
      rem /= n;
    }
    std::vector<int> nyq;
    for (int a = 0; a < r; ++a)
      if (n % 2 == 0 && idx[a] == n / 2) nyq.push_back(a);
    const int variants = 1 << nyq.size();
    cplx acc = 0.0;
    for (int v = 0; v < variants; ++v) {
      long fidx = 0;
      for (int a = 0; a < r; ++a) {
        int kf = dft_frequency(idx[a], n);
        auto it = std::find(nyq.begin(), nyq.end(), a);
        if (it != nyq.end() && ((v >> (it - nyq.begin())) & 1)) kf = -kf;
        fidx = fidx * nz + ((kf % nz) + nz) % nz;
      }
      acc += cf[fidx];
    }
    cc[flat] = acc / static_cast<double>(variants);
  }
  return coefficients_to_grid(cc, n, r);
}

}  // namespace leafindex
