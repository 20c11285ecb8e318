// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/properties.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "leafindex/analytic_index.hpp"
#include "leafindex/builtin_operators.hpp"
#include "leafindex/charclass.hpp"
#include "leafindex/coeff_io.hpp"
#include "leafindex/cochains.hpp"
#include "leafindex/error.hpp"
#include "leafindex/forms.hpp"
#include "leafindex/idempotent.hpp"
#include "leafindex/metric.hpp"
#include "leafindex/pairing.hpp"
#include "leafindex/parametrix.hpp"
#include "leafindex/topological.hpp"
#include "leafindex/trace.hpp"

namespace leafindex {

FiberedGSpace swap_shift_space(int N, int grid) {
  AffineMap shift = AffineMap::translation({Rational(1, 2), Rational(0)});
  return FiberedGSpace::from_group(FiniteGroup::cyclic(2), BaseModel::uniform(2), {{1, 0}},
                                   FiberModel{FiberModel::Kind::torus, 2, N, grid}, {shift});
}

namespace {

PropertyResult check(const std::string& name, double value, double tol, std::string note = {}) {
  return {name, value, tol, value <= tol, std::move(note)};
}

// Random trigonometric polynomial of the given band, one per base point.
ZField random_field(const FiberedGSpace& space, int band, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const int r = space.dim();
  ZField f(space.num_base(), VecC::Zero(space.num_grid()));
  std::vector<double> z(r);
  for (int x = 0; x < space.num_base(); ++x)
    for (int t = 0; t < 4; ++t) {
      std::uniform_int_distribution<int> k(-band, band);
      std::vector<int> nu(r);
      for (auto& v : nu) v = k(rng);
      const cplx a(g(rng), g(rng));
      for (int j = 0; j < space.num_grid(); ++j) {
        space.fiber().point(j, z.data());
        double ph = 0.0;
        for (int i = 0; i < r; ++i) ph += nu[i] * z[i];
        f[x][j] += a * std::polar(1.0, 2.0 * kPi * ph);
      }
    }
  return f;
}

FoliatedForm random_form(const FiberedGSpace& space, int degree, int band, std::mt19937_64& rng) {
  FoliatedForm w = FoliatedForm::zero(space, degree);
  for (int I = 0; I < w.num_components(); ++I) {
    ZField f = random_field(space, band, rng);
    for (int x = 0; x < space.num_base(); ++x) w.comp[x][I] = f[x];
  }
  return w;
}

FiberedGSpace trivial_torus(int N, int grid) {
  return FiberedGSpace::from_group(FiniteGroup::trivial(), BaseModel::uniform(1), {},
                                   FiberModel{FiberModel::Kind::torus, 2, N, grid}, {});
}

PropertyResult groupoid_axioms(std::uint64_t) {
  AffineMap rot = AffineMap::translation({Rational(1, 3), Rational(0)});
  auto space = FiberedGSpace::from_group(FiniteGroup::cyclic(3), BaseModel::uniform(3), {{1, 2, 0}},
                                         FiberModel{FiberModel::Kind::torus, 2, 2, 6}, {rot});
  const auto& G = space.groupoid();
  return check("groupoid_associativity", G.associativity_violations(), 0.0,
               fmt::format("{} composable triples", G.num_composable_triples()));
}

PropertyResult cutoff_partition(std::uint64_t) {
  auto space = swap_shift_space(4, 12);
  auto c = compute_cutoff(space, cosine_bump(space, 0.5, 1));
  return check("cutoff_partition_identity", partition_defect(space, c), 1e-12);
}

PropertyResult metric_invariance(std::uint64_t) {
  AffineMap swap = AffineMap::identity(2);
  swap.A << 0, 1, 1, 0;
  auto space = FiberedGSpace::from_group(FiniteGroup::cyclic(2), BaseModel::uniform(1), {{0}},
                                         FiberModel{FiberModel::Kind::torus, 2, 4, 12}, {swap});
  MatR g0(2, 2);
  g0 << 1, 0, 0, 4;
  auto c = compute_cutoff(space, constant_bump(space));
  auto eta = average_metric(space, constant_metric(space, g0), c);
  return check("metric_averaging_invariance", metric_invariance_defect(space, eta), 1e-12);
}

PropertyResult modular_function(std::uint64_t) {
  auto space = swap_shift_space(4, 12);
  auto c = compute_cutoff(space, constant_bump(space));
  auto omega = uniform_density(space);
  double worst = 0.0;
  for (double d : modular_cocycle(space.groupoid(), omega)) worst = std::max(worst, std::abs(d - 1.0));
  return check("modular_function_trivial", worst, 1e-12);
}

PropertyResult d_squared(std::uint64_t seed) {
  auto space = swap_shift_space(4, 12);
  std::mt19937_64 rng(seed);
  FoliatedForm f = random_form(space, 0, 3, rng);
  return check("leafwise_d_squared", d_leafwise(space, d_leafwise(space, f)).max_abs(), 1e-9);
}

PropertyResult cohomology_ranks(std::uint64_t) {
  auto ranks = invariant_cohomology_ranks(trivial_torus(3, 8), 3);
  const bool ok = ranks == std::vector<int>{1, 2, 1};
  return check("torus_cohomology_ranks", ok ? 0.0 : 1.0, 0.0, fmt::format("ranks {}", fmt::join(ranks, ",")));
}

PropertyResult exact_integral(std::uint64_t seed) {
  auto space = swap_shift_space(4, 12);
  auto c1 = compute_cutoff(space, constant_bump(space));
  auto c2 = compute_cutoff(space, cosine_bump(space, 0.6, 1));
  auto omega = uniform_density(space);
  std::mt19937_64 rng(seed);
  double worst = 0.0, spread = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    FoliatedForm beta = invariant_project(space, random_form(space, 1, 3, rng));
    FoliatedForm db = mark_invariant(space, d_leafwise(space, beta), 1e-10);
    worst = std::max(worst, std::abs(integrate_invariant(space, db, c1, omega)));
    FoliatedForm top = mark_invariant(space, invariant_project(space, random_form(space, 2, 3, rng)), 1e-10);
    spread = std::max(spread, std::abs(integrate_invariant(space, top, c1, omega) -
                                       integrate_invariant(space, top, c2, omega)));
  }
  return check("exact_forms_integrate_to_zero", std::max(worst, spread), 1e-9,
               fmt::format("|int d beta| {:.1e}, cut-off spread {:.1e}", worst, spread));
}

PropertyResult van_est_chain(std::uint64_t seed) {
  auto space = swap_shift_space(4, 12);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = trial % 2;  // degrees 0 and 1 (lambda lands in degrees 1 and 2)
    std::vector<ZField> factors;
    for (int i = 0; i <= k; ++i) factors.push_back(random_field(space, 2, rng));
    ASCochain phi = ASCochain::elementary_tensor(factors);
    FoliatedForm lhs = van_est_lambda(space, d_AS(phi));
    FoliatedForm rhs = d_leafwise(space, van_est_lambda(space, phi));
    worst = std::max(worst, (lhs - rhs).max_abs());
  }
  return check("van_est_chain_map", worst, 1e-10);
}

PropertyResult trace_commutator(std::uint64_t seed) {
  auto space = swap_shift_space(3, 8);
  auto c = compute_cutoff(space, constant_bump(space));
  auto omega = uniform_density(space);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto K1 = random_invariant_kernel(space, 1, 2, seed + 2 * trial);
    auto K2 = random_invariant_kernel(space, 1, 2, seed + 2 * trial + 1);
    SmoothingKernel comm = K1 * K2 - K2 * K1;
    worst = std::max(worst, std::abs(trace_tau(space, comm, c, omega)) / (K1.norm() * K2.norm()));
  }
  return check("trace_vanishes_on_commutators", worst, 1e-9);
}

PropertyResult trace_cutoff(std::uint64_t seed) {
  auto space = swap_shift_space(3, 8);
  auto c1 = compute_cutoff(space, constant_bump(space));
  auto c2 = compute_cutoff(space, cosine_bump(space, 0.7, 0));
  auto omega = uniform_density(space);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto K = random_invariant_kernel(space, 1, 2, seed + trial);
    worst = std::max(worst, std::abs(trace_tau(space, K, c1, omega) - trace_tau(space, K, c2, omega)) / K.norm());
  }
  return check("trace_cutoff_independence", worst, 1e-9);
}

PropertyResult trace_symbol(std::uint64_t seed) {
  const int N = 6;
  auto space = swap_shift_space(N, 16);
  auto c = compute_cutoff(space, cosine_bump(space, 0.4, 1));
  auto omega = uniform_density(space);
  ModeSpace modes = ModeSpace::uniform(2, N, 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    // Band 2 in z with only even z1-frequencies, so the half shift fixes it.
    const cplx a0(g(rng), g(rng)), a1(g(rng), g(rng)), a2(g(rng), g(rng));
    const double width = 1.0 + 0.2 * std::abs(g(rng));
    Symbol a;
    a.smoothing = true;
    a.invariant = true;
    a.band = 2;
    a.order = -kInf;
    a.eval = [=](int, const double* z, const int* nu, Eigen::Ref<MatC> out) {
      const double n2 = double(nu[0]) * nu[0] + double(nu[1]) * nu[1];
      out(0, 0) = (a0 + a1 * std::polar(1.0, 2.0 * kPi * (2 * z[0])) + a2 * std::polar(1.0, 2.0 * kPi * z[1])) *
                  std::exp(-n2 / (width * width));
    };
    auto P = quantize(space, a, modes, modes);
    const cplx lhs = trace_tau(space, kernel_of(space, P), c, omega);
    const cplx rhs = trace_symbol_formula(space, a, modes, c, omega);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return check("trace_symbol_formula", worst, 1e-8);
}

PropertyResult a_hat_coefficients(std::uint64_t) {
  auto a = a_hat_series(3);
  const double err =
      std::max({std::abs(a[0] - 1.0), std::abs(a[1] + 1.0 / 24.0), std::abs(a[2] - 7.0 / 5760.0)});
  return check("a_hat_one_root_series", err, 1e-15);
}

PropertyResult chern_closed(std::uint64_t) {
  auto grid = CotangentGrid::make(2, 12, 12, 16);
  auto P = clutching_projector(twisted_dolbeault(1, 4).symbol, 0, grid);
  auto w = chern_character_form(P, {}, 2.0);
  return check("chern_character_closed", closedness_defect(w), 1e-9);
}

PropertyResult chern_additive(std::uint64_t) {
  auto grid = CotangentGrid::make(2, 8, 8, 12);
  auto P = clutching_projector(twisted_dolbeault(1, 4).symbol, 0, grid);
  auto Q = clutching_projector(dbar(4).symbol, 0, grid);
  auto wp = chern_character_form(P), wq = chern_character_form(Q), ws = chern_character_form(direct_sum(P, Q));
  double worst = 0.0;
  for (std::size_t k = 0; k < ws.values.size(); ++k)
    worst = std::max(worst, (ws.values[k] - wp.values[k] - wq.values[k]).max_abs());
  return check("chern_character_additive", worst, 1e-9);
}

// The top-degree integral of ch over the compactified cotangent bundle of the
// torus does not see the connection: adding a z-dependent A changes ch by an
// exact form with no boundary term.
PropertyResult chern_connection(std::uint64_t seed) {
  auto grid = CotangentGrid::make(2, 12, 12, 24);
  auto P = clutching_projector(twisted_dolbeault(1, 4).symbol, 0, grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  MatC M1(P.m, P.m), M2(P.m, P.m);
  for (int i = 0; i < P.m; ++i)
    for (int j = 0; j < P.m; ++j) {
      M1(i, j) = cplx(g(rng), g(rng));
      M2(i, j) = cplx(g(rng), g(rng));
    }
  ConnectionForm A;
  A.A.push_back([M1](const double* z) -> MatC { return 0.3 * std::sin(2 * kPi * z[1]) * M1; });
  A.A.push_back([M2](const double* z) -> MatC { return 0.2 * std::cos(2 * kPi * (z[0] - z[1])) * M2; });
  auto top = [](const CharClassForm& w) { return pushforward(w).by_degree[2][0].mean(); };
  const cplx v0 = top(chern_character_form(P)), v1 = top(chern_character_form(P, A));
  return check("chern_connection_independence", std::abs(v1 - v0) / std::max(1.0, std::abs(v0)), 1e-8,
               fmt::format("integral {:.9f}", v0.real()));
}

struct SmallIndex {
  FiberedGSpace space;
  CutoffDensity c;
  TransversalDensity omega;
  IndexIdempotent idx;
};

SmallIndex small_index(double eps) {
  auto space = trivial_torus(4, 12);
  auto c = compute_cutoff(space, constant_bump(space));
  auto omega = uniform_density(space);
  auto spec = twisted_dolbeault(1, 4);
  auto D = mark_invariant(space, quantize(space, spec.symbol, spec.src, spec.dst), 1e-10);
  auto par = parametrix(space, spec, D);
  auto idx = index_idempotent(space, D, par, eps, 1e-12);
  return {space, c, omega, idx};
}

PropertyResult pairing_coboundary(std::uint64_t seed) {
  auto s = small_index(0.3);
  std::mt19937_64 rng(seed);
  ASCochain psi = ASCochain::alternating_bump(random_field(s.space, 2, rng), random_field(s.space, 2, rng), 0.3);
  ASCochain phi = d_AS(psi);
  phi.invariant = true;
  return check("pairing_with_coboundary", std::abs(pair_cocycle(s.space, phi, s.idx, s.c, s.omega)), 1e-8);
}

PropertyResult localization_stability(std::uint64_t seed) {
  // Unit and bump coboundaries are the cocycles supported within eps/2 here.
  // eps / 2 must stay a few kernel widths (~1.3 / N) wide or truncation changes the class.
  const double eps = 0.6;
  auto build = [](double e) {
    auto space = trivial_torus(10, 22);
    auto c = compute_cutoff(space, constant_bump(space));
    auto omega = uniform_density(space);
    auto spec = twisted_dolbeault(1, 10);
    auto D = mark_invariant(space, quantize(space, spec.symbol, spec.src, spec.dst), 1e-10);
    auto par = parametrix(space, spec, D);
    return SmallIndex{space, c, omega, index_idempotent(space, D, par, e, 1e-12)};
  };
  auto a = build(eps), b = build(eps / 2);
  auto diff = [&](const ASCochain& phi) {
    return std::abs(pair_cocycle(a.space, phi, a.idx, a.c, a.omega) - pair_cocycle(b.space, phi, b.idx, b.c, b.omega));
  };
  ASCochain unit = ASCochain::elementary_tensor({ZField(1, VecC::Ones(a.space.num_grid()))});
  unit.invariant = true;
  double worst = diff(unit);
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 3; ++trial) {
    ASCochain phi =
        d_AS(ASCochain::alternating_bump(random_field(a.space, 2, rng), random_field(a.space, 2, rng), eps / 2));
    phi.invariant = true;
    worst = std::max(worst, diff(phi));
  }
  return check("localization_stability", worst, 1e-8,
               worst > 1e-8 ? "truncation at eps/2 changes the idempotent's class" : "");
}

PropertyResult cache_roundtrip(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DenseArray a;
  a.dims = {2, 3, 4};
  for (int i = 0; i < 24; ++i) a.values.emplace_back(g(rng), g(rng));
  auto bytes = encode_dense(a);
  DenseArray b = decode_dense(bytes);
  double err = b.dims == a.dims ? 0.0 : 1.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) err = std::max(err, std::abs(a.values[i] - b.values[i]));
  bytes[bytes.size() / 2] ^= 0x40;
  bool detected = false;
  try {
    decode_dense(bytes);
  } catch (const Error& e) {
    detected = e.kind() == ErrorKind::corrupt_cache;
  }
  return check("dense_cache_roundtrip", detected ? err : 1.0, 0.0, detected ? "" : "corruption not detected");
}

PropertyResult topological_cutoff(std::uint64_t) {
  auto space = swap_shift_space(4, 12);
  auto c1 = compute_cutoff(space, constant_bump(space));
  auto c2 = compute_cutoff(space, cosine_bump(space, 0.5, 1));
  auto omega = uniform_density(space);
  auto eta = constant_metric(space, MatR::Identity(2, 2));
  auto spec = twisted_dolbeault(2, 4);
  FoliatedForm one = FoliatedForm::function(space, ZField(2, VecC::Ones(space.num_grid())));
  one.invariant = true;
  const cplx t1 = topological_index(space, one, spec.symbol, c1, omega, eta);
  const cplx t2 = topological_index(space, one, spec.symbol, c2, omega, eta);
  return check("topological_cutoff_independence", std::abs(t1 - t2) / std::max(1.0, std::abs(t1)), 1e-8);
}

}  // namespace

const std::vector<Property>& properties() {
  static const std::vector<Property> registry = {
      {"groupoid_associativity", "associativity on all composable triples", groupoid_axioms},
      {"cutoff_partition_identity", "orbit sums of the cut-off equal 1", cutoff_partition},
      {"metric_averaging_invariance", "averaged metric is invariant", metric_invariance},
      {"modular_function_trivial", "uniform density has trivial modular function", modular_function},
      {"leafwise_d_squared", "d o d = 0 on foliated forms", d_squared},
      {"torus_cohomology_ranks", "invariant cohomology of T^2 has ranks 1,2,1", cohomology_ranks},
      {"exact_forms_integrate_to_zero", "int d beta = 0 and cut-off independence", exact_integral},
      {"van_est_chain_map", "lambda d_AS = d lambda", van_est_chain},
      {"trace_vanishes_on_commutators", "tau[K1, K2] = 0", trace_commutator},
      {"trace_cutoff_independence", "tau does not depend on the cut-off", trace_cutoff},
      {"trace_symbol_formula", "tau(Op(a)) = symbol integral", trace_symbol},
      {"a_hat_one_root_series", "(x/2)/sinh(x/2) coefficients", a_hat_coefficients},
      {"chern_character_closed", "d ch = 0", chern_closed},
      {"chern_character_additive", "ch(p + q) = ch(p) + ch(q)", chern_additive},
      {"chern_connection_independence", "integrated ch does not depend on the connection", chern_connection},
      {"pairing_with_coboundary", "pairing kills d_AS psi", pairing_coboundary},
      {"localization_stability", "pairings at eps and eps/2 agree", localization_stability},
      {"dense_cache_roundtrip", "coefficient files round-trip and detect corruption", cache_roundtrip},
      {"topological_cutoff_independence", "topological side does not depend on the cut-off", topological_cutoff},
  };
  return registry;
}

std::vector<PropertyResult> run_properties(std::uint64_t seed, int workers) {
  const auto& props = properties();
  std::vector<PropertyResult> out(props.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < props.size();) {
      try {
        out[i] = props[i].run(seed);
      } catch (const std::exception& e) {
        out[i] = {props[i].name, kInf, 0.0, false, e.what()};
      }
    }
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(props.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

std::string properties_csv(const std::vector<PropertyResult>& results) {
  std::string out = "property,value,tolerance,status\n";
  for (const auto& r : results)
    out += fmt::format("{},{:.3e},{:.1e},{}\n", r.name, r.value, r.tolerance, r.pass ? "pass" : "fail");
  return out;
}

std::string properties_table(const std::vector<PropertyResult>& results) {
  std::string out = fmt::format("{:<34} {:>10} {:>9} {:>6}  {}\n", "property", "value", "tol", "status", "note");
  for (const auto& r : results)
    out += fmt::format("{:<34} {:>10.2e} {:>9.1e} {:>6}  {}\n", r.name, r.value, r.tolerance, r.pass ? "pass" : "FAIL",
                       r.note);
  return out;
}

}  // namespace leafindex
