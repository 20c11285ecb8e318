// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "leafindex/space.hpp"

namespace leafindex {

struct PropertyResult {
  std::string name;
  double value = 0.0;      // measured defect
  double tolerance = 0.0;  // pass iff value <= tolerance
  bool pass = false;
  std::string note;
};

struct Property {
  std::string name;
  std::string description;
  std::function<PropertyResult(std::uint64_t seed)> run;
};

// Registered invariant checks of the invariants suite.
const std::vector<Property>& properties();

// Every property, in registry order, on `workers` threads.  Exceptions are
// reported as failures.
std::vector<PropertyResult> run_properties(std::uint64_t seed, int workers);

std::string properties_csv(const std::vector<PropertyResult>& results);
std::string properties_table(const std::vector<PropertyResult>& results);

// Z/2 acting on two base points by a swap and on T^2 by a half shift in z1.
FiberedGSpace swap_shift_space(int N, int grid);

}  // namespace leafindex
