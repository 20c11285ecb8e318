// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "leafindex/builtin_operators.hpp"
#include "leafindex/operator.hpp"

namespace leafindex {

struct ParametrixOptions {
  enum class Mode {
    smoothing,   // stop once the remainders vanish on the boundary shell of the mode boxes
    projective,  // iterate until the remainders are idempotent
  };
  Mode mode = Mode::smoothing;
  // t = heat_exponent / s_min^2, s_min the smallest symbol singular value on the shell.
  double heat_exponent = 23.0;
  double shell_tol = 1e-10;
  double projective_tol = 1e-10;
  int max_iterations = 60;
  // Ellipticity is certified for |nu| >= xi0; negative means half the smallest box half-width.
  double xi0 = -1.0;
};

// Q with R0 = 1 - QD and R1 = 1 - DQ.
struct Parametrix {
  OperatorFamily Q, R0, R1;
  double t = 0.0;
  int iterations = 0;
};

// Q0 = f_t(D* D) D*, f_t(s) = (1 - exp(-t s)) / s, then Q <- (2 - QD) Q,
// which squares both remainders at every step.
Parametrix parametrix(const FiberedGSpace& space, const OperatorSpec& spec, const OperatorFamily& D,
                      const ParametrixOptions& opt = {});

// Largest remainder entry in rows/columns of modes within `width` of a box face.
double shell_magnitude(const OperatorFamily& R, int width = 1);

}  // namespace leafindex
