// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
//
// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include <fmt/format.h>

#include "leafindex/analytic_index.hpp"
#include "leafindex/builtin_operators.hpp"
#include "leafindex/density.hpp"
#include "leafindex/forms.hpp"
#include "leafindex/metric.hpp"
#include "leafindex/operator.hpp"
#include "leafindex/properties.hpp"
#include "leafindex/runner.hpp"
#include "leafindex/scenario.hpp"
#include "leafindex/topological.hpp"

using namespace leafindex;

namespace {

constexpr std::uint64_t kSeed = 1;

int failures = 0;

void line(int n, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string detail(const ResultRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.details)
    if (k == key) return v;
  return {};
}

double real_part(const std::string& s) { return s.empty() ? NAN : std::stod(s); }

// Criterion 1: trivial group, T^2, N = 8; index vs topological side for each twist.
void atiyah_singer() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool integers = true;
  for (int d = -2; d <= 2; ++d) {
    auto space = FiberedGSpace::from_group(FiniteGroup::trivial(), BaseModel::uniform(1), {},
                                           FiberModel{FiberModel::Kind::torus, 2, 8, 20}, {});
    auto spec = twisted_dolbeault(d, 8);
    auto D = quantize(space, spec.symbol, spec.src, spec.dst);
    integers = integers && analytic_index(D).index[0] == d;
    auto c = compute_cutoff(space, constant_bump(space));
    auto omega = uniform_density(space);
    auto eta = constant_metric(space, MatR::Identity(2, 2));
    auto one = FoliatedForm::function(space, ZField(1, VecC::Ones(space.num_grid())));
    one.invariant = true;
    worst = std::max(worst, std::abs(topological_index(space, one, spec.symbol, c, omega, eta) - double(d)));
  }
  const double t = seconds_since(t0);
  line(1, integers && worst <= 1e-6 && t < 10.0,
       fmt::format("analytic = d for d in -2..2: {}; max |top - d| = {:.2e} (tol 1e-6); {:.2f} s (limit 10 s)",
                   integers ? "yes" : "no", worst, t));
}

std::map<std::string, PropertyResult> by_name(const std::vector<PropertyResult>& v) {
  std::map<std::string, PropertyResult> m;
  for (const auto& r : v) m[r.name] = r;
  return m;
}

std::string describe(const PropertyResult& r) {
  return fmt::format("{} {:.2e} (tol {:.0e}){}", r.name, r.value, r.tolerance, r.note.empty() ? "" : " " + r.note);
}

}  // namespace

int main() {
  atiyah_singer();

  std::vector<Scenario> all;
  for (const auto& name : builtin_names()) all.push_back(*builtin_scenario(name));
  const int workers = worker_count();
  auto records = run_scenarios(all, workers);
  std::map<std::string, ResultRecord> rec;
  for (const auto& r : records) rec[r.scenario] = r;

  {
    double worst = 0.0;
    bool ok = true;
    std::string bad;
    for (const auto& [name, r] : rec) {
      if (name.rfind("S1", 0) != 0 && name.rfind("S2", 0) != 0 && name.rfind("S4", 0) != 0) continue;
      if (r.status == "error") {
        ok = false;
        bad += fmt::format(" {}: {}", name, r.message);
        continue;
      }
      const double e = std::abs(r.pairing - r.topological);
      worst = std::max(worst, e);
      if (e > 1e-6) ok = false;
    }
    line(2, ok, fmt::format("S1/S2/S4 max |pairing - topological| = {:.2e} (tol 1e-6){}", worst, bad));
  }

  auto props = by_name(run_properties(kSeed, workers));
  {
    const auto& a = props["trace_vanishes_on_commutators"];
    const auto& b = props["trace_cutoff_independence"];
    line(3, a.pass && b.pass, describe(a) + "; " + describe(b));
  }
  line(4, props["trace_symbol_formula"].pass, describe(props["trace_symbol_formula"]));
  line(5, props["exact_forms_integrate_to_zero"].pass, describe(props["exact_forms_integrate_to_zero"]));
  {
    const auto& a = props["van_est_chain_map"];
    const auto& b = props["pairing_with_coboundary"];
    line(6, a.pass && b.pass, describe(a) + "; " + describe(b));
  }

  {
    const auto& r = rec["S2-free-z2-d2"];
    const double top = r.topological.real(), red = real_part(detail(r, "reduction")),
                 quo = real_part(detail(r, "quotient_index"));
    const double spread = std::max({std::abs(top - red), std::abs(top - quo), std::abs(red - quo)});
    const bool ok = r.status != "error" && spread <= 1e-6 && std::abs(quo - 1.0) <= 1e-6;
    line(7, ok, fmt::format("S2 topological {:.9f}, reduction {:.9f}, quotient index {} (expected d/2 = 1); "
                            "max pairwise gap {:.2e} (tol 1e-6){}",
                            top, red, quo, spread, r.status == "error" ? " error: " + r.message : ""));
  }

  {
    const auto& r = rec["S5-orbifold-family"];
    const double chern = real_part(detail(r, "chern_integral")), top = real_part(detail(r, "family_topological"));
    // the family is D_1 at every point: Riemann-Roch forces index 1 everywhere
    const bool indices = r.analytic == std::vector<int>(4, 1);
    const bool ok = r.status != "error" && indices && std::abs(chern - top) <= 1e-6;
    line(8, ok, fmt::format("S5 chern integral {:.9f}, topological {:.9f}, |diff| {:.2e} (tol 1e-6); "
                            "per-point indices {}{}",
                            chern, top, std::abs(chern - top), indices ? "all 1" : "mismatch",
                            r.status == "error" ? " error: " + r.message : ""));
  }

  line(9, props["localization_stability"].pass, describe(props["localization_stability"]));

  {
    auto again = run_scenarios(all, workers);
    auto props2 = run_properties(kSeed, workers);
    std::vector<PropertyResult> p1;
    for (const auto& p : properties()) p1.push_back(props[p.name]);
    const bool same_scen = csv(records) == csv(again);
    const bool same_prop = properties_csv(p1) == properties_csv(props2);
    line(10, same_scen && same_prop,
         fmt::format("rerun CSV bodies identical: scenarios {}, invariants {}", same_scen ? "yes" : "no",
                     same_prop ? "yes" : "no"));
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
