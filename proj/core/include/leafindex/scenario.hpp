// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leafindex/space.hpp"

namespace leafindex {

inline constexpr int kMaxCutoff = 32;
inline constexpr int kMaxGrid = 128;
inline constexpr int kMaxBase = 64;

struct GroupSpec {
  std::string type = "trivial";  // trivial | cyclic
  int order = 1;
  int base_size = 1;
  std::vector<double> base_weights;            // empty: uniform with total mass 1
  std::vector<std::vector<int>> base_action;   // one permutation per generator
};

struct FiberActionSpec {
  std::vector<std::vector<int>> matrix;  // r x r, identity when empty
  std::vector<std::string> translation;  // rationals, zero when empty
};

struct OperatorSpecData {
  std::string kind = "dolbeault";  // dolbeault | dbar | circle_derivative | multiplier | coefficients
  int twist_degree = 1;
  std::string symbol;      // multiplier: expression in nu1.. (or nu), z1..
  double order = 1.0;
  std::string file;        // coefficients: dense file, relative to the scenario
  std::string model;       // coefficients: large-xi model in z*, xi*
  double perturbation = 0.0;  // invariant smoothing perturbation, relative to the singular gap
};

struct CocycleSpec {
  std::string kind = "unit";  // unit | area | elementary
  int degree = 0;
  std::vector<std::string> factors;  // elementary: expressions in z1.. per tensor slot
  double germ_radius = 0.5;
};

struct DensitySpec {
  std::vector<double> values;  // empty: uniform mass-1 density
  bool invariant = true;
};

struct Scenario {
  std::string name;
  std::string source = "builtin";  // file path or "builtin"
  GroupSpec groupoid;
  FiberModel fiber;
  std::vector<FiberActionSpec> fiber_action;  // one per generator
  OperatorSpecData op;
  CocycleSpec cocycle;
  DensitySpec density;
  double pairing_tol = 1e-6;
  double invariant_tol = 1e-8;
  double heat_exponent = 23.0;
  double localization = 0.0;  // 0: no localization
  std::uint64_t seed = 0;
  bool seed_given = false;
  // What the run compares against, besides pairing vs topological.
  bool quotient_oracle = false;  // free translation: index of the quotient operator
  bool family = false;           // orbifold family: integrated index bundle
};

void validate_scenario(const Scenario& s);
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario(const std::string& yaml_text, const std::string& source = "<string>");
// Builtin name, or a path to a scenario file.
Scenario load_scenario(const std::string& name_or_path);

std::vector<std::string> builtin_names();
std::optional<Scenario> builtin_scenario(const std::string& name);
std::string builtin_description(const std::string& name);

// Structured-text echo of the resolved scenario (defaults filled in).
std::string echo_scenario(const Scenario& s);

FiberedGSpace build_space(const Scenario& s);

}  // namespace leafindex
