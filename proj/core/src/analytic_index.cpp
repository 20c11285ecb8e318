// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/analytic_index.hpp"

#include <Eigen/SVD>
#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

AnalyticIndex analytic_index(const OperatorFamily& D, double rel) {
  AnalyticIndex out;
  for (int x = 0; x < D.num_base(); ++x) {
    const MatC& M = D.mats[x];
    Eigen::BDCSVD<MatC> svd(M);
    const VecR& s = svd.singularValues();
    const double thr = s.size() ? rel * s[0] : 0.0;
    int rank = 0;
    double kept = kInf, dropped = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s[i] > thr / 10.0 && s[i] < thr * 10.0)
        fail(ErrorKind::numerical,
             fmt::format("analytic_index: singular value {:.3e} is within a factor 10 of the threshold {:.3e}; "
                         "increase the Fourier cutoff N",
                         s[i], thr));
      if (s[i] > thr) {
        ++rank;
        kept = s[i];
      } else {
        dropped = std::max(dropped, s[i]);
      }
    }
    const int k = static_cast<int>(M.cols()) - rank, c = static_cast<int>(M.rows()) - rank;
    out.kernel.push_back(k);
    out.cokernel.push_back(c);
    out.index.push_back(k - c);
    out.gap.push_back(dropped > 0.0 ? kept / dropped : kInf);
  }
  return out;
}

void check_orbit_constant(const GroupoidModel& G, const AnalyticIndex& ind) {
  for (int g = 0; g < G.num_arrows(); ++g)
    if (ind.index[G.source(g)] != ind.index[G.target(g)] || ind.kernel[G.source(g)] != ind.kernel[G.target(g)])
      fail(ErrorKind::validation,
           fmt::format("analytic_index: kernel rank jumps along arrow '{}'", G.arrow(g).id));
}

}  // namespace leafindex
