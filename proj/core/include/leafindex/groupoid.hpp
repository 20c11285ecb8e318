// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace leafindex {

struct BaseModel {
  std::vector<std::string> points;
  std::vector<double> weights;
  int chart_dim = 0;

  int size() const { return static_cast<int>(points.size()); }
  int index_of(const std::string& id) const;  // -1 if absent
  void validate() const;

  // n points named x0..x{n-1} with uniform weight total_mass / n.
  static BaseModel uniform(int n, double total_mass = 1.0);
};

struct Arrow {
  std::string id;
  int source = 0;
  int target = 0;
  int element = -1;  // group element for action groupoids, -1 otherwise
};

// Arrows are drawn x -> y with s = x, t = y; g1 g2 is defined when
// t(g1) = s(g2), and then s(g1 g2) = s(g1), t(g1 g2) = t(g2).
class GroupoidModel {
 public:
  GroupoidModel() = default;
  // compose[g1 * n + g2] is the product or -1 when undefined.
  GroupoidModel(BaseModel base, std::vector<Arrow> arrows, std::vector<int> compose,
                std::vector<int> inverse, std::vector<int> units);

  const BaseModel& base() const { return base_; }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const Arrow& arrow(int g) const { return arrows_[g]; }
  int source(int g) const { return arrows_[g].source; }
  int target(int g) const { return arrows_[g].target; }
  std::optional<int> compose(int g1, int g2) const;
  int inverse(int g) const { return inverse_[g]; }
  int unit(int x) const { return units_[x]; }
  bool is_unit(int g) const;

  // G^x = {g : s(g) = x}, and the arrows landing at x.
  std::vector<int> with_source(int x) const;
  std::vector<int> with_target(int x) const;

  // Number of composable triples on which associativity fails.
  int associativity_violations() const;
  int num_composable_triples() const;

 private:
  void validate() const;

  BaseModel base_;
  std::vector<Arrow> arrows_;
  std::vector<int> compose_;
  std::vector<int> inverse_;
  std::vector<int> units_;
};

// A finite group given by its multiplication table, together with a
// presentation (generators and relator words) used to validate actions.
struct FiniteGroup {
  struct Relation {
    std::string name;
    std::vector<std::pair<int, int>> word;  // (generator slot, exponent)
  };

  std::string name;
  std::vector<std::vector<int>> mul;  // mul[a][b] = a b
  std::vector<int> inv;
  int identity = 0;
  std::vector<int> generators;  // element ids
  std::vector<Relation> relations;

  int order() const { return static_cast<int>(mul.size()); }
  int power(int a, int e) const;
  int evaluate(const std::vector<std::pair<int, int>>& word) const;

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);
};

// Action groupoid H x X: arrow (h, x) has t = x and s = h x, so that
// (h1, x1)(h2, x2) = (h1 h2, x2).  base_action holds one permutation of the
// base per generator, with perm[x] = h x.
GroupoidModel build_action_groupoid(const FiniteGroup& group, const BaseModel& base,
                                    const std::vector<std::vector<int>>& base_action);

// Permutation of the base for every group element, extending base_action.
std::vector<std::vector<int>> extend_base_action(
    const FiniteGroup& group, int base_size, const std::vector<std::vector<int>>& base_action);

}  // namespace leafindex
