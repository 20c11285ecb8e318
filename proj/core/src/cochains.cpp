// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/cochains.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "leafindex/error.hpp"
#include "leafindex/fourier.hpp"

namespace leafindex {

double lifted_difference(double a, double b) {
  double d = b - a + 0.5;
  return d - std::floor(d) - 0.5;
}

double flat_bump(double s, double R) {
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  if (s <= 0.5 * R) return 1.0;
  if (s >= R) return 0.0;
  double t = (R - s) / (0.5 * R);  // 1 at R/2, 0 at R
  return psi(t) / (psi(t) + psi(1.0 - t));
}

namespace {

double periodic_distance(const double* za, const double* zb, int r) {
  double acc = 0.0;
  for (int i = 0; i < r; ++i) {
    double d = lifted_difference(za[i], zb[i]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

double edge_value(const ASEdge& e, const double* za, const double* zb, int r) {
  if (e.kind == ASEdge::Kind::delta) return lifted_difference(za[e.axis], zb[e.axis]);
  return flat_bump(periodic_distance(za, zb, r), e.radius);
}

}  // namespace

cplx ASCochain::evaluate(const FiberedGSpace& space, int x, const std::vector<int>& pts) const {
  if (static_cast<int>(pts.size()) != degree + 1) fail(ErrorKind::validation, "cochain: wrong tuple length");
  if (opaque) return opaque(x, pts);
  const int r = space.dim();
  std::vector<double> z(static_cast<size_t>(r) * pts.size());
  for (size_t i = 0; i < pts.size(); ++i) space.fiber().point(pts[i], &z[i * r]);
  cplx acc = 0.0;
  for (const auto& t : terms) {
    cplx v = t.coeff;
    for (size_t i = 0; i < t.field.size(); ++i)
      if (t.field[i] >= 0) v *= fields[t.field[i]][x][pts[i]];
    for (const auto& e : t.edges) v *= edge_value(e, &z[e.a * r], &z[e.b * r], r);
    acc += v;
  }
  return acc;
}

ASCochain ASCochain::elementary_tensor(const std::vector<ZField>& factors, double germ_radius) {
  ASCochain c;
  c.degree = static_cast<int>(factors.size()) - 1;
  c.germ_radius = germ_radius;
  c.fields = factors;
  ASTerm t;
  for (size_t i = 0; i < factors.size(); ++i) t.field.push_back(static_cast<int>(i));
  c.terms.push_back(t);
  return c;
}

ASCochain ASCochain::area_cocycle() {
  ASCochain c;
  c.degree = 2;
  c.germ_radius = 0.5;
  c.invariant = true;
  auto term = [](cplx coeff, int ax01, int ax12) {
    ASTerm t;
    t.coeff = coeff;
    t.field = {-1, -1, -1};
    t.edges = {{ASEdge::Kind::delta, 0, 1, ax01, 0.0}, {ASEdge::Kind::delta, 1, 2, ax12, 0.0}};
    return t;
  };
  c.terms = {term(0.5, 0, 1), term(-0.5, 1, 0)};
  return c;
}

ASCochain ASCochain::alternating_bump(const ZField& f0, const ZField& f1, double radius) {
  ASCochain c;
  c.degree = 1;
  c.germ_radius = kInf;  // defined everywhere; the bump only localizes it
  c.fields = {f0, f1};
  ASEdge bump{ASEdge::Kind::bump, 0, 1, 0, radius};
  c.terms.push_back({1.0, {0, 1}, {bump}});
  c.terms.push_back({-1.0, {1, 0}, {bump}});
  return c;
}

ASCochain operator+(const ASCochain& a, const ASCochain& b) {
  if (a.degree != b.degree) fail(ErrorKind::validation, "cochain: adding different degrees");
  if (a.opaque || b.opaque) {
    ASCochain c;
    c.degree = a.degree;
    c.germ_radius = std::min(a.germ_radius, b.germ_radius);
    c.opaque = [a, b](int x, const std::vector<int>& p) {
      // Evaluation of opaque sums needs the space only through the operands.
      return a.opaque(x, p) + b.opaque(x, p);
    };
    if (!a.opaque || !b.opaque) fail(ErrorKind::validation, "cochain: cannot mix opaque and product cochains");
    return c;
  }
  ASCochain c = a;
  const int off = static_cast<int>(a.fields.size());
  c.fields.insert(c.fields.end(), b.fields.begin(), b.fields.end());
  for (ASTerm t : b.terms) {
    for (int& f : t.field)
      if (f >= 0) f += off;
    c.terms.push_back(std::move(t));
  }
  c.germ_radius = std::min(a.germ_radius, b.germ_radius);
  c.invariant = a.invariant && b.invariant;
  return c;
}

ASCochain operator*(cplx s, const ASCochain& a) {
  ASCochain c = a;
  if (c.opaque) {
    auto f = a.opaque;
    c.opaque = [f, s](int x, const std::vector<int>& p) { return s * f(x, p); };
  }
  for (auto& t : c.terms) t.coeff *= s;
  return c;
}

ASCochain d_AS(const ASCochain& phi) {
  ASCochain out;
  out.degree = phi.degree + 1;
  out.germ_radius = phi.germ_radius;
  out.fields = phi.fields;
  out.invariant = phi.invariant;
  if (phi.opaque) {
    auto f = phi.opaque;
    const int k = phi.degree;
    out.opaque = [f, k](int x, const std::vector<int>& p) {
      cplx acc = 0.0;
      for (int i = 0; i <= k + 1; ++i) {
        std::vector<int> q;
        for (int m = 0; m <= k + 1; ++m)
          if (m != i) q.push_back(p[m]);
        acc += (i % 2 ? -1.0 : 1.0) * f(x, q);
      }
      return acc;
    };
    return out;
  }
  for (int i = 0; i <= phi.degree + 1; ++i) {
    auto relabel = [i](int m) { return m < i ? m : m + 1; };
    for (const auto& t : phi.terms) {
      ASTerm s;
      s.coeff = (i % 2 ? -1.0 : 1.0) * t.coeff;
      s.field.assign(phi.degree + 2, -1);
      for (int m = 0; m <= phi.degree; ++m) s.field[relabel(m)] = t.field[m];
      for (ASEdge e : t.edges) {
        e.a = relabel(e.a);
        e.b = relabel(e.b);
        s.edges.push_back(e);
      }
      out.terms.push_back(std::move(s));
    }
  }
  return out;
}

FoliatedForm van_est_lambda(const FiberedGSpace& space, const ASCochain& phi) {
  if (!phi.elementary())
    fail(ErrorKind::validation,
         "van_est_lambda: cochain is not given by product terms; decompose it into elementary tensors first");
  const int r = space.dim(), k = phi.degree, n = space.fiber().grid;
  if (k > r) fail(ErrorKind::validation, "van_est_lambda: degree exceeds the leaf dimension");
  FoliatedForm out = FoliatedForm::zero(space, k);
  const int nb = space.num_base(), np = space.num_grid();
  for (const auto& t : phi.terms) {
    for (const auto& e : t.edges)
      if (e.a == e.b) fail(ErrorKind::validation, "cochain: edge with equal endpoints");
    // Each slot i = 1..k differentiates one factor depending on z_i; every
    // delta edge is differentiated exactly once, bumps never (flat at 0).
    std::vector<int> deltas;
    for (size_t e = 0; e < t.edges.size(); ++e)
      if (t.edges[e].kind == ASEdge::Kind::delta) deltas.push_back(static_cast<int>(e));
    // choice[i]: -1 - v for the vertex field of slot i, or an edge index.
    std::vector<int> choice(k + 1, 0);
    std::vector<int> used(t.edges.size(), 0);
    auto emit = [&]() {
      for (int e : deltas)
        if (used[e] != 1) return;
      for (int x = 0; x < nb; ++x) {
        // 0-form prefactor: undifferentiated vertex fields.
        VecC pre = VecC::Constant(np, t.coeff);
        std::vector<bool> diff(k + 1, false);
        for (int i = 1; i <= k; ++i)
          if (choice[i] < 0) diff[i] = true;
        for (int v = 0; v <= k; ++v)
          if (t.field[v] >= 0 && !diff[v]) pre = pre.cwiseProduct(phi.fields[t.field[v]][x]);
        // Wedge of the slot 1-forms in order; each is a list of (axis, coefficient field).
        FoliatedForm acc = FoliatedForm::zero(space, 0);
        for (int xx = 0; xx < nb; ++xx) acc.comp[xx][0].setZero();
        acc.comp[x][0] = pre;
        for (int i = 1; i <= k; ++i) {
          FoliatedForm one = FoliatedForm::zero(space, 1);
          if (choice[i] < 0) {
            const VecC& f = phi.fields[t.field[i]][x];
            for (int a = 0; a < r; ++a) one.comp[x][a] = spectral_derivative(f, n, r, a);
          } else {
            const ASEdge& e = t.edges[choice[i]];
            one.comp[x][e.axis].setConstant(e.b == i ? 1.0 : -1.0);
          }
          acc = wedge(acc, one);
        }
        for (size_t I = 0; I < out.comp[x].size(); ++I) out.comp[x][I] += acc.comp[x][I];
      }
    };
    auto rec = [&](auto&& self, int i) -> void {
      if (i > k) {
        emit();
        return;
      }
      if (t.field[i] >= 0) {
        choice[i] = -1 - i;
        self(self, i + 1);
      }
      for (int e : deltas) {
        const ASEdge& ed = t.edges[e];
        if ((ed.a == i || ed.b == i) && used[e] == 0) {
          used[e] = 1;
          choice[i] = e;
          self(self, i + 1);
          used[e] = 0;
        }
      }
    };
    rec(rec, 1);
  }
  out.invariant = phi.invariant;
  return out;
}

ASCochain pullback_cochain(const FiberedGSpace& space, int g, const ASCochain& phi) {
  if (!phi.elementary()) fail(ErrorKind::validation, "pullback_cochain: product terms required");
  const auto& G = space.groupoid();
  const Eigen::MatrixXi& A = space.action(g).A;
  const int r = space.dim(), s = G.source(g), t = G.target(g);
  ASCochain out;
  out.degree = phi.degree;
  out.germ_radius = phi.germ_radius;
  out.invariant = phi.invariant;
  // Fields: value over t(g) is the pullback of the value over s(g); other base
  // points are left as they are (callers only use the t(g) slot).
  out.fields = phi.fields;
  for (size_t i = 0; i < out.fields.size(); ++i) out.fields[i][t] = space.pullback(g, phi.fields[i][s]);
  bool isometric = (A.cwiseAbs().colwise().sum().array() == 1).all() && (A.cwiseAbs().rowwise().sum().array() == 1).all();
  for (const auto& term : phi.terms) {
    std::vector<ASTerm> partial{ASTerm{term.coeff, term.field, {}}};
    for (const auto& e : term.edges) {
      std::vector<ASTerm> next;
      if (e.kind == ASEdge::Kind::bump) {
        if (!isometric) fail(ErrorKind::validation, "pullback_cochain: bump factors need an isometric action");
        for (auto p : partial) {
          p.edges.push_back(e);
          next.push_back(std::move(p));
        }
      } else {
        for (const auto& p : partial)
          for (int l = 0; l < r; ++l) {
            if (A(e.axis, l) == 0) continue;
            ASTerm q = p;
            q.coeff *= static_cast<double>(A(e.axis, l));
            ASEdge f = e;
            f.axis = l;
            q.edges.push_back(f);
            next.push_back(std::move(q));
          }
      }
      partial = std::move(next);
    }
    out.terms.insert(out.terms.end(), partial.begin(), partial.end());
  }
  return out;
}

ASCochain invariant_project(const FiberedGSpace& space, const ASCochain& phi) {
  const auto& G = space.groupoid();
  const int nb = space.num_base();
  ASCochain out;
  out.degree = phi.degree;
  out.germ_radius = phi.germ_radius;
  out.invariant = true;
  // Each arrow contributes its own copy of the fields, supported over t(g).
  for (int x = 0; x < nb; ++x) {
    auto arrows = G.with_target(x);
    for (int k : arrows) {
      ASCochain p = pullback_cochain(space, k, phi);
      for (auto& f : p.fields)
        for (int y = 0; y < nb; ++y)
          if (y != x) f[y].setZero();
      // Terms without any field would not be localized to x; attach an indicator.
      ZField indicator(nb, VecC::Zero(space.num_grid()));
      indicator[x].setOnes();
      p.fields.push_back(indicator);
      const int ind = static_cast<int>(p.fields.size()) - 1;
      for (auto& t : p.terms) {
        // Multiply vertex 0 by the indicator (fields live at x only anyway).
        if (t.field[0] < 0) t.field[0] = ind;
        t.coeff /= static_cast<double>(arrows.size());
      }
      p.invariant = true;
      out = out + p;
    }
  }
  return out;
}

double cochain_invariance_defect(const FiberedGSpace& space, const ASCochain& phi, int samples,
                                 unsigned long long seed) {
  const auto& G = space.groupoid();
  const int np = space.num_grid(), k = phi.degree;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, np - 1);
  const auto D = space.distance_matrix();
  double worst = 0.0;
  for (int g = 0; g < G.num_arrows(); ++g) {
    if (!space.grid_preserving()) fail(ErrorKind::validation, "cochain invariance needs a grid-preserving action");
    const auto& map = space.grid_map(g);
    for (int s = 0; s < samples; ++s) {
      std::vector<int> pts(k + 1);
      pts[0] = pick(rng);
      for (int i = 1; i <= k; ++i) {
        do pts[i] = pick(rng);
        while (D(pts[0], pts[i]) >= 0.5 * phi.germ_radius);
      }
      std::vector<int> img(k + 1);
      for (int i = 0; i <= k; ++i) img[i] = map[pts[i]];
      cplx a = phi.evaluate(space, G.target(g), pts);
      cplx b = phi.evaluate(space, G.source(g), img);
      worst = std::max(worst, std::abs(a - b));
    }
  }
  return worst;
}

GroupoidCochain::GroupoidCochain(const GroupoidModel& G, int degree)
    : degree_(degree), num_arrows_(G.num_arrows()) {
  if (degree < 0) fail(ErrorKind::validation, "groupoid cochain: negative degree");
  if (degree == 0) {
    for (int x = 0; x < G.base().size(); ++x) strings_.push_back({x});
  } else {
    std::vector<std::vector<int>> cur;
    for (int g = 0; g < G.num_arrows(); ++g) cur.push_back({g});
    for (int p = 1; p < degree; ++p) {
      std::vector<std::vector<int>> next;
      for (const auto& s : cur)
        for (int g = 0; g < G.num_arrows(); ++g)
          if (G.target(s.back()) == G.source(g)) {
            auto t = s;
            t.push_back(g);
            next.push_back(std::move(t));
          }
      cur = std::move(next);
    }
    strings_ = std::move(cur);
  }
  for (const auto& s : strings_) {
    long long key = 0;
    for (int g : s) key = key * (num_arrows_ + 1) + g;
    keys_.push_back(key);
  }
  std::vector<size_t> order(strings_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return keys_[a] < keys_[b]; });
  std::vector<std::vector<int>> s2;
  std::vector<long long> k2;
  for (size_t i : order) {
    s2.push_back(strings_[i]);
    k2.push_back(keys_[i]);
  }
  strings_ = std::move(s2);
  keys_ = std::move(k2);
  values_.assign(strings_.size(), 0.0);
}

cplx& GroupoidCochain::operator[](const std::vector<int>& s) {
  long long key = 0;
  for (int g : s) key = key * (num_arrows_ + 1) + g;
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) fail(ErrorKind::validation, "groupoid cochain: string is not composable");
  return values_[it - keys_.begin()];
}

cplx GroupoidCochain::value(const std::vector<int>& s) const {
  return const_cast<GroupoidCochain&>(*this)[s];
}

GroupoidCochain delta(const GroupoidModel& G, const GroupoidCochain& nu) {
  const int p = nu.degree();
  GroupoidCochain out(G, p + 1);
  for (size_t idx = 0; idx < out.strings_.size(); ++idx) {
    const auto& s = out.strings_[idx];
    cplx acc = 0.0;
    if (p == 0) {
      acc = nu.value({G.target(s[0])}) - nu.value({G.source(s[0])});
    } else {
      acc += nu.value(std::vector<int>(s.begin() + 1, s.end()));
      for (int i = 0; i < p; ++i) {
        std::vector<int> f;
        for (int j = 0; j < i; ++j) f.push_back(s[j]);
        f.push_back(*G.compose(s[i], s[i + 1]));
        for (int j = i + 2; j <= p; ++j) f.push_back(s[j]);
        acc += ((i + 1) % 2 ? -1.0 : 1.0) * nu.value(f);
      }
      acc += ((p + 1) % 2 ? -1.0 : 1.0) * nu.value(std::vector<int>(s.begin(), s.end() - 1));
    }
    out.values_[idx] = acc;
  }
  return out;
}

FoliatedForm van_est_degree0(const FiberedGSpace& space, const GroupoidCochain& nu) {
  if (nu.degree() != 0) fail(ErrorKind::validation, "van_est_degree0: expects a 0-cochain");
  FoliatedForm w = FoliatedForm::zero(space, 0);
  for (int x = 0; x < space.num_base(); ++x) w.comp[x][0].setConstant(nu.value({x}));
  w.invariant = true;
  return w;
}

}  // namespace leafindex
