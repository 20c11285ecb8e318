// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "leafindex/cochains.hpp"
#include "leafindex/idempotent.hpp"

namespace leafindex {

// sum_x w_x Omega_x [ sum_{z_0..z_2k} c(z_0) phi(z_0, ..., z_2k) tr T(z_0, z_1) ... T(z_2k, z_0)
//                     - sum_z c(z) phi(z, ..., z) tr e ],  T = P = e + X.
// Product terms may only couple vertices adjacent on the cycle 0 -> 1 -> ... -> 2k -> 0.
cplx pair_cocycle(const FiberedGSpace& space, const ASCochain& phi, const IndexIdempotent& idx,
                  const CutoffDensity& c, const TransversalDensity& omega);

}  // namespace leafindex
