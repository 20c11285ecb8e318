// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/groupoid.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

int BaseModel::index_of(const std::string& id) const {
  for (int i = 0; i < size(); ++i)
    if (points[i] == id) return i;
  return -1;
}

void BaseModel::validate() const {
  if (points.empty()) fail(ErrorKind::validation, "base: no points");
  if (weights.size() != points.size())
    fail(ErrorKind::validation, "base: weights and points differ in length");
  std::set<std::string> seen;
  for (int i = 0; i < size(); ++i) {
    if (!(weights[i] > 0.0))
      fail(ErrorKind::validation, fmt::format("base: weight of '{}' is not positive", points[i]));
    if (!seen.insert(points[i]).second)
      fail(ErrorKind::validation, fmt::format("base: duplicate point id '{}'", points[i]));
  }
  if (chart_dim < 0) fail(ErrorKind::validation, "base: negative chart_dim");
}

BaseModel BaseModel::uniform(int n, double total_mass) {
  BaseModel b;
  for (int i = 0; i < n; ++i) {
    b.points.push_back(fmt::format("x{}", i));
    b.weights.push_back(total_mass / n);
  }
  return b;
}

GroupoidModel::GroupoidModel(BaseModel base, std::vector<Arrow> arrows, std::vector<int> compose,
                             std::vector<int> inverse, std::vector<int> units)
    : base_(std::move(base)),
      arrows_(std::move(arrows)),
      compose_(std::move(compose)),
      inverse_(std::move(inverse)),
      units_(std::move(units)) {
  validate();
}

std::optional<int> GroupoidModel::compose(int g1, int g2) const {
  int r = compose_[static_cast<size_t>(g1) * num_arrows() + g2];
  if (r < 0) return std::nullopt;
  return r;
}

bool GroupoidModel::is_unit(int g) const {
  return units_[source(g)] == g;
}

std::vector<int> GroupoidModel::with_source(int x) const {
  std::vector<int> out;
  for (int g = 0; g < num_arrows(); ++g)
    if (source(g) == x) out.push_back(g);
  return out;
}

std::vector<int> GroupoidModel::with_target(int x) const {
  std::vector<int> out;
  for (int g = 0; g < num_arrows(); ++g)
    if (target(g) == x) out.push_back(g);
  return out;
}

void GroupoidModel::validate() const {
  base_.validate();
  const int n = num_arrows();
  const int m = base_.size();
  if (static_cast<int>(compose_.size()) != n * n || static_cast<int>(inverse_.size()) != n ||
      static_cast<int>(units_.size()) != m)
    fail(ErrorKind::construction, "groupoid: table sizes do not match arrow/base counts");
  for (const Arrow& a : arrows_)
    if (a.source < 0 || a.source >= m || a.target < 0 || a.target >= m)
      fail(ErrorKind::construction, fmt::format("groupoid: arrow '{}' has endpoint off the base", a.id));
  for (int x = 0; x < m; ++x) {
    int u = units_[x];
    if (u < 0 || u >= n || source(u) != x || target(u) != x)
      fail(ErrorKind::construction, fmt::format("groupoid: unit at '{}' is not a loop", base_.points[x]));
  }
  for (int g1 = 0; g1 < n; ++g1) {
    for (int g2 = 0; g2 < n; ++g2) {
      auto c = compose(g1, g2);
      bool composable = target(g1) == source(g2);
      if (composable != c.has_value())
        fail(ErrorKind::construction,
             fmt::format("groupoid: compose({}, {}) defined iff t(g1) = s(g2) violated",
                         arrows_[g1].id, arrows_[g2].id));
      if (c && (source(*c) != source(g1) || target(*c) != target(g2)))
        fail(ErrorKind::construction,
             fmt::format("groupoid: endpoints of {}*{} are wrong", arrows_[g1].id, arrows_[g2].id));
    }
  }
  for (int g = 0; g < n; ++g) {
    int gi = inverse_[g];
    if (gi < 0 || gi >= n || inverse_[gi] != g)
      fail(ErrorKind::construction, fmt::format("groupoid: inverse of '{}' is not an involution", arrows_[g].id));
    auto a = compose(g, gi);
    auto b = compose(gi, g);
    if (!a || *a != units_[source(g)] || !b || *b != units_[target(g)])
      fail(ErrorKind::construction, fmt::format("groupoid: g g^-1 is not a unit for '{}'", arrows_[g].id));
    if (*compose(units_[source(g)], g) != g || *compose(g, units_[target(g)]) != g)
      fail(ErrorKind::construction, fmt::format("groupoid: units do not act trivially on '{}'", arrows_[g].id));
  }
}

int GroupoidModel::associativity_violations() const {
  int bad = 0;
  const int n = num_arrows();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto ab = compose(a, b);
      if (!ab) continue;
      for (int c = 0; c < n; ++c) {
        auto bc = compose(b, c);
        if (!bc) continue;
        if (*compose(*ab, c) != *compose(a, *bc)) ++bad;
      }
    }
  return bad;
}

int GroupoidModel::num_composable_triples() const {
  int count = 0;
  const int n = num_arrows();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (compose(a, b))
        for (int c = 0; c < n; ++c)
          if (compose(b, c)) ++count;
  return count;
}

int FiniteGroup::power(int a, int e) const {
  if (e < 0) {
    a = inv[a];
    e = -e;
  }
  int r = identity;
  for (int i = 0; i < e; ++i) r = mul[r][a];
  return r;
}

int FiniteGroup::evaluate(const std::vector<std::pair<int, int>>& word) const {
  int r = identity;
  for (auto [slot, e] : word) r = mul[r][power(generators[slot], e)];
  return r;
}

FiniteGroup FiniteGroup::trivial() {
  FiniteGroup g;
  g.name = "trivial";
  g.mul = {{0}};
  g.inv = {0};
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) fail(ErrorKind::validation, "cyclic group order must be positive");
  if (n == 1) return trivial();
  FiniteGroup g;
  g.name = fmt::format("Z/{}", n);
  g.mul.assign(n, std::vector<int>(n));
  g.inv.resize(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) g.mul[a][b] = (a + b) % n;
    g.inv[a] = (n - a) % n;
  }
  g.generators = {1};
  g.relations.push_back({fmt::format("g^{}", n), {{0, n}}});
  return g;
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  FiniteGroup g;
  g.name = a.name + " x " + b.name;
  const int na = a.order(), nb = b.order(), n = na * nb;
  auto id = [nb](int i, int j) { return i * nb + j; };
  g.mul.assign(n, std::vector<int>(n));
  g.inv.resize(n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < nb; ++l) g.mul[id(i, j)][id(k, l)] = id(a.mul[i][k], b.mul[j][l]);
      g.inv[id(i, j)] = id(a.inv[i], b.inv[j]);
    }
  g.identity = id(a.identity, b.identity);
  const int ga = static_cast<int>(a.generators.size());
  for (int s : a.generators) g.generators.push_back(id(s, b.identity));
  for (int s : b.generators) g.generators.push_back(id(a.identity, s));
  for (const auto& r : a.relations) g.relations.push_back(r);
  for (auto r : b.relations) {
    for (auto& w : r.word) w.first += ga;
    g.relations.push_back(r);
  }
  for (int i = 0; i < ga; ++i)
    for (int j = 0; j < static_cast<int>(b.generators.size()); ++j)
      g.relations.push_back({fmt::format("[a{},b{}]", i, j),
                             {{i, 1}, {ga + j, 1}, {i, -1}, {ga + j, -1}}});
  return g;
}

namespace {

std::vector<int> compose_perm(const std::vector<int>& p, const std::vector<int>& q) {
  std::vector<int> r(q.size());
  for (size_t x = 0; x < q.size(); ++x) r[x] = p[q[x]];
  return r;
}

std::vector<int> inverse_perm(const std::vector<int>& p) {
  std::vector<int> r(p.size());
  for (size_t x = 0; x < p.size(); ++x) r[p[x]] = static_cast<int>(x);
  return r;
}

}  // namespace

std::vector<std::vector<int>> extend_base_action(
    const FiniteGroup& group, int base_size, const std::vector<std::vector<int>>& base_action) {
  if (base_action.size() != group.generators.size())
    fail(ErrorKind::validation,
         fmt::format("base action: expected {} generator permutations, got {}",
                     group.generators.size(), base_action.size()));
  std::vector<int> ident(base_size);
  for (int x = 0; x < base_size; ++x) ident[x] = x;
  for (const auto& p : base_action) {
    if (static_cast<int>(p.size()) != base_size)
      fail(ErrorKind::validation, "base action: permutation has wrong length");
    std::vector<int> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != ident) fail(ErrorKind::validation, "base action: not a permutation");
  }
  for (const auto& rel : group.relations) {
    std::vector<int> acc = ident;
    for (auto [slot, e] : rel.word) {
      std::vector<int> step = e >= 0 ? base_action[slot] : inverse_perm(base_action[slot]);
      for (int k = 0; k < std::abs(e); ++k) acc = compose_perm(acc, step);
    }
    if (acc != ident)
      fail(ErrorKind::construction,
           fmt::format("base action violates relation {} of {}", rel.name, group.name));
  }
  // Breadth-first words for every element; h * gen acts as perm_h o perm_gen.
  const int n = group.order();
  std::vector<std::vector<int>> perm(n);
  perm[group.identity] = ident;
  std::deque<int> queue{group.identity};
  while (!queue.empty()) {
    int h = queue.front();
    queue.pop_front();
    for (size_t s = 0; s < group.generators.size(); ++s) {
      int hg = group.mul[h][group.generators[s]];
      if (perm[hg].empty()) {
        perm[hg] = compose_perm(perm[h], base_action[s]);
        queue.push_back(hg);
      }
    }
  }
  for (int h = 0; h < n; ++h)
    if (perm[h].empty())
      fail(ErrorKind::construction, fmt::format("{}: generators do not generate the group", group.name));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (perm[group.mul[a][b]] != compose_perm(perm[a], perm[b]))
        fail(ErrorKind::construction,
             fmt::format("base action is not a homomorphism on {} (relations incomplete)", group.name));
  return perm;
}

GroupoidModel build_action_groupoid(const FiniteGroup& group, const BaseModel& base,
                                    const std::vector<std::vector<int>>& base_action) {
  base.validate();
  const int m = base.size();
  const int n = group.order();
  auto perm = extend_base_action(group, m, base_action);

  auto arrow_id = [m](int h, int x) { return h * m + x; };
  std::vector<Arrow> arrows(static_cast<size_t>(n) * m);
  for (int h = 0; h < n; ++h)
    for (int x = 0; x < m; ++x) {
      Arrow& a = arrows[arrow_id(h, x)];
      a.id = fmt::format("h{}@{}", h, base.points[x]);
      a.target = x;
      a.source = perm[h][x];
      a.element = h;
    }
  const int na = n * m;
  std::vector<int> compose(static_cast<size_t>(na) * na, -1);
  std::vector<int> inverse(na);
  for (int h1 = 0; h1 < n; ++h1)
    for (int x1 = 0; x1 < m; ++x1) {
      int g1 = arrow_id(h1, x1);
      inverse[g1] = arrow_id(group.inv[h1], perm[h1][x1]);
      for (int h2 = 0; h2 < n; ++h2)
        for (int x2 = 0; x2 < m; ++x2) {
          int g2 = arrow_id(h2, x2);
          if (arrows[g1].target == arrows[g2].source)
            compose[static_cast<size_t>(g1) * na + g2] = arrow_id(group.mul[h1][h2], x2);
        }
    }
  std::vector<int> units(m);
  for (int x = 0; x < m; ++x) units[x] = arrow_id(group.identity, x);
  return GroupoidModel(base, std::move(arrows), std::move(compose), std::move(inverse),
                       std::move(units));
}

}  // namespace leafindex
