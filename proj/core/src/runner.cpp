// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <Eigen/SVD>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "leafindex/analytic_index.hpp"
#include "leafindex/builtin_operators.hpp"
#include "leafindex/coeff_io.hpp"
#include "leafindex/cochains.hpp"
#include "leafindex/expression.hpp"
#include "leafindex/idempotent.hpp"
#include "leafindex/metric.hpp"
#include "leafindex/pairing.hpp"
#include "leafindex/parametrix.hpp"
#include "leafindex/reduction.hpp"
#include "leafindex/topological.hpp"

namespace leafindex {

Error stage_error(const std::string& stage, const Error& e) {
  return Error(e.kind(), fmt::format("[{}] {}", stage, e.what()));
}

namespace {

template <class F>
auto staged(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw stage_error(stage, e);
  }
}

std::vector<std::string> coordinate_names(const char* stem, int r) {
  if (r == 1) return {stem};
  std::vector<std::string> out;
  for (int a = 0; a < r; ++a) out.push_back(fmt::format("{}{}", stem, a + 1));
  return out;
}

// Variables of symbol expressions: frequencies (nu or xi), then z.
std::function<cplx(const double*, const double*)> symbol_function(const std::string& text, int r) {
  auto nu = coordinate_names("nu", r), xi = coordinate_names("xi", r), z = coordinate_names("z", r);
  std::vector<std::string> vars = nu;
  vars.insert(vars.end(), xi.begin(), xi.end());
  vars.insert(vars.end(), z.begin(), z.end());
  Expression e = Expression::parse(text, vars);
  return [e, r](const double* zz, const double* xx) {
    cplx v[6];
    for (int a = 0; a < r; ++a) {
      v[a] = xx[a];
      v[r + a] = xx[a];
      v[2 * r + a] = zz[a];
    }
    return e(v);
  };
}

bool mentions_z(const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == 'z' && (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1])))) return true;
  return false;
}

OperatorSpec make_spec(const Scenario& s) {
  const int r = s.fiber.dim, N = s.fiber.cutoff;
  if (s.op.kind == "dolbeault") return twisted_dolbeault(s.op.twist_degree, N);
  if (s.op.kind == "dbar") return dbar(N);
  if (s.op.kind == "circle_derivative") return circle_derivative(N);
  if (s.op.kind == "multiplier") {
    const int band = mentions_z(s.op.symbol) ? (s.fiber.grid - 1) / 2 : 0;
    return scalar_operator(s.op.symbol, symbol_function(s.op.symbol, r), s.op.order, r, N, band);
  }
  // Coefficient files: the symbol is read off the matrices, the model comes from the scenario.
  OperatorSpec op;
  op.name = s.op.file;
  op.src = op.dst = ModeSpace::uniform(r, N, 1);
  op.symbol.order = s.op.order;
  auto f = symbol_function(s.op.model, r);
  op.symbol.model = [f](int, const double* z, const double* dir, Eigen::Ref<MatC> out) { out(0, 0) = f(z, dir); };
  return op;
}

// Gaussian-decaying random matrices, equal on base points of one orbit.
void add_perturbation(const FiberedGSpace& space, OperatorFamily& D, double scale, std::uint64_t seed) {
  const int nb = D.num_base();
  std::vector<int> rep(nb);
  for (int x = 0; x < nb; ++x) {
    rep[x] = x;
    for (int g : space.groupoid().with_source(x)) rep[x] = std::min(rep[x], space.groupoid().target(g));
  }
  auto weight = [](const ModeSpace& m, int i) {
    int c = 0;
    while (c + 1 < m.num_comps() && i >= m.offset(c + 1)) ++c;
    std::vector<int> nu(m.dim());
    m.comps[c].mode(i - m.offset(c), nu.data());
    double n2 = 0.0;
    for (int v : nu) n2 += double(v) * v;
    return std::exp(-0.5 * n2);
  };
  std::vector<MatC> K(nb);
  for (int x = 0; x < nb; ++x) {
    if (rep[x] != x) continue;
    std::mt19937_64 rng(seed + 7919 * static_cast<std::uint64_t>(x));
    std::normal_distribution<double> g;
    MatC M(D.dst.size(), D.src.size());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j)
        M(i, j) = cplx(g(rng), g(rng)) * weight(D.dst, static_cast<int>(i)) * weight(D.src, static_cast<int>(j));
    K[x] = M * (scale / M.norm());
  }
  for (int x = 0; x < nb; ++x) D.mats[x] += K[rep[x]];
}

ASCochain make_cocycle(const FiberedGSpace& space, const Scenario& s) {
  const auto& c = s.cocycle;
  if (c.kind == "area") {
    ASCochain phi = ASCochain::area_cocycle();
    phi.germ_radius = c.germ_radius;
    return phi;
  }
  std::vector<ZField> factors;
  std::vector<std::string> texts = c.kind == "unit" ? std::vector<std::string>{"1"} : c.factors;
  const auto vars = coordinate_names("z", space.dim());
  std::vector<double> z(space.dim());
  std::vector<cplx> v(space.dim());
  for (const auto& t : texts) {
    Expression e = Expression::parse(t, vars);
    ZField f(space.num_base(), VecC(space.num_grid()));
    for (int x = 0; x < space.num_base(); ++x)
      for (int j = 0; j < space.num_grid(); ++j) {
        space.fiber().point(j, z.data());
        for (int a = 0; a < space.dim(); ++a) v[a] = z[a];
        f[x][j] = e(v);
      }
    factors.push_back(f);
  }
  ASCochain phi = ASCochain::elementary_tensor(factors, c.germ_radius);
  if (c.kind == "unit") {
    phi.invariant = true;
    return phi;
  }
  phi = invariant_project(space, phi);
  phi.invariant = true;
  return phi;
}

double clock_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ResultRecord run_scenario(const Scenario& s0, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Scenario s = s0;
  if (opt.seed) s.seed = *opt.seed;
  if (opt.tol) s.pairing_tol = *opt.tol;
  ResultRecord rec;
  rec.scenario = s.name;

  const FiberedGSpace space = staged("space", [&] { return build_space(s); });
  const CutoffDensity c = staged("cutoff", [&] { return compute_cutoff(space, constant_bump(space)); });
  const TransversalDensity omega = staged("density", [&] {
    if (s.density.values.empty()) return uniform_density(space);
    TransversalDensity w{s.density.values, s.density.invariant};
    if (w.invariant) validate_density(space.groupoid(), w);
    return w;
  });
  const LeafwiseMetric eta = staged("metric", [&] {
    return average_metric(space, constant_metric(space, MatR::Identity(space.dim(), space.dim())), c);
  });

  OperatorSpec spec = staged("operator", [&] { return make_spec(s); });
  OperatorFamily D = staged("operator", [&] {
    const std::filesystem::path cache = opt.cache_dir.empty() ? std::filesystem::path() : opt.cache_dir / (s.name + ".lixd");
    OperatorFamily P;
    if (s.op.kind == "coefficients") {
      P = operator_from_dense(read_dense(s.op.file), spec.src, spec.dst);
      if (P.num_base() == 1 && space.num_base() > 1) P.mats.assign(space.num_base(), P.mats[0]);
      if (P.num_base() != space.num_base()) fail(ErrorKind::validation, "coefficient file: one matrix per base point");
      P.order = s.op.order;
    } else if (!cache.empty() && std::filesystem::exists(cache)) {
      P = operator_from_dense(read_dense(cache), spec.src, spec.dst);
      P.order = spec.symbol.order;
    } else {
      P = quantize(space, spec.symbol, spec.src, spec.dst);
      if (!cache.empty()) {
        std::filesystem::create_directories(cache.parent_path());
        write_dense(cache, to_dense(P));
      }
    }
    if (s.op.kind == "coefficients") {
      Symbol table = symbol_of(space, P);
      table.model = spec.symbol.model;
      table.order = s.op.order;
      spec.symbol = table;
    }
    return P;
  });
  // Perturbation after quantization keeps the principal symbol.
  staged("operator", [&] {
    if (s.op.perturbation > 0.0) {
      double gap = kInf;
      for (const MatC& M : D.mats) {
        Eigen::BDCSVD<MatC> svd(M);
        const VecR& sv = svd.singularValues();
        for (Eigen::Index k = 0; k < sv.size(); ++k)
          if (sv[k] > 1e-8 * sv[0]) gap = std::min(gap, sv[k]);
      }
      add_perturbation(space, D, s.op.perturbation * gap, s.seed);
    }
    D = mark_invariant(space, D, s.invariant_tol);
    spec.symbol.invariant = true;
    return 0;
  });

  const AnalyticIndex ai = staged("analytic", [&] { return analytic_index(D); });
  rec.analytic = ai.index;

  ParametrixOptions popt;
  popt.heat_exponent = s.heat_exponent;
  const Parametrix par = staged("parametrix", [&] { return parametrix(space, spec, D, popt); });
  const IndexIdempotent idx = staged("idempotent", [&] {
    return index_idempotent(space, D, par, s.localization > 0.0 ? s.localization : kInf);
  });
  const ASCochain phi = staged("cocycle", [&] { return make_cocycle(space, s); });
  rec.pairing = staged("pairing", [&] { return pair_cocycle(space, phi, idx, c, omega); });
  const FoliatedForm alpha =
      staged("cocycle", [&] { return mark_invariant(space, van_est_lambda(space, phi), s.invariant_tol); });
  rec.topological = staged("topological", [&] { return topological_index(space, alpha, spec.symbol, c, omega, eta); });
  rec.abs_err = std::abs(rec.pairing - rec.topological);
  rec.pass = rec.abs_err <= s.pairing_tol;

  if (s.cocycle.kind == "unit") {
    // k = 0: the pairing is the cut-off integral of the per-point indices.
    const auto cbar = base_cutoff(space, c);
    double expect = 0.0;
    for (int x = 0; x < space.num_base(); ++x) expect += omega.measure(space.groupoid().base(), x) * cbar[x] * ai.index[x];
    const double err = std::abs(rec.pairing - expect);
    rec.details.emplace_back("integrated_analytic", fmt::format("{:.12f}", expect));
    rec.pass = rec.pass && err <= s.pairing_tol;
  }
  if (s.quotient_oracle) {
    staged("quotient", [&] {
      if (s.op.twist_degree % 2) fail(ErrorKind::validation, "quotient oracle needs an even twist");
      FiberedGSpace q = FiberedGSpace::from_group(FiniteGroup::trivial(), BaseModel::uniform(1), {}, s.fiber, {});
      OperatorSpec qs = twisted_dolbeault(s.op.twist_degree / 2, s.fiber.cutoff, 2);
      AnalyticIndex qa = analytic_index(quantize(q, qs.symbol, qs.src, qs.dst));
      rec.analytic = qa.index;
      cplx red = free_action_reduction(space, alpha, spec.symbol, omega);
      rec.details.emplace_back("quotient_index", std::to_string(qa.index[0]));
      rec.details.emplace_back("reduction", format_complex(red));
      rec.pass = rec.pass && std::abs(red - rec.topological) <= s.pairing_tol &&
                 std::abs(double(qa.index[0]) - rec.topological) <= s.pairing_tol;
      return 0;
    });
  }
  if (s.family) {
    staged("family", [&] {
      OrbifoldFamilyResult fam = family_index_orbifold(space, D, spec.symbol, c, omega, eta, {}, s.invariant_tol);
      rec.details.emplace_back("chern_integral", fmt::format("{:.12f}", fam.chern_integral));
      rec.details.emplace_back("family_topological", format_complex(fam.topological));
      rec.pass = rec.pass && fam.difference() <= s.pairing_tol && fam.indices == ai.index;
      return 0;
    });
  }
  rec.status = rec.pass ? "pass" : "fail";
  rec.wall_seconds = clock_seconds(t0);
  return rec;
}

std::vector<ResultRecord> run_scenarios(const std::vector<Scenario>& scenarios, int workers, const RunOptions& opt) {
  std::vector<ResultRecord> out(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < scenarios.size();) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        out[i] = run_scenario(scenarios[i], opt);
      } catch (const Error& e) {
        ResultRecord r;
        r.scenario = scenarios[i].name;
        r.status = "error";
        r.error_kind = e.kind();
        r.message = e.what();
        const std::string what = e.what();
        if (!what.empty() && what[0] == '[') r.stage = what.substr(1, what.find(']') - 1);
        r.wall_seconds = clock_seconds(t0);
        out[i] = r;
      }
    }
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(scenarios.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

int worker_count() {
  const char* env = std::getenv("LEAFINDEX_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 256)
    fail(ErrorKind::validation, fmt::format("LEAFINDEX_WORKERS: expected a positive integer, got '{}'", env));
  return static_cast<int>(n);
}

std::string format_complex(cplx v) {
  // Signed zeros print as zeros so reruns stay byte-identical.
  auto clean = [](double x) { return std::abs(x) < 5e-13 ? 0.0 : x; };
  const double re = clean(v.real()), im = clean(v.imag());
  if (std::abs(im) < 1e-9) return fmt::format("{:.12f}", re);
  return fmt::format("{:.12f}{:+.12f}i", re, im);
}

std::string csv_header() { return "scenario,analytic_index,pairing,topological,abs_err,status\n"; }

std::string csv_row(const ResultRecord& r) {
  if (r.status == "error") return fmt::format("{},,,,,error\n", r.scenario);
  std::string analytic;
  bool constant = true;
  for (int v : r.analytic) constant = constant && v == r.analytic.front();
  if (constant && !r.analytic.empty())
    analytic = std::to_string(r.analytic.front());
  else
    analytic = fmt::format("\"{}\"", fmt::join(r.analytic, ";"));
  return fmt::format("{},{},{},{},{:.3e},{}\n", r.scenario, analytic, format_complex(r.pairing),
                     format_complex(r.topological), r.abs_err, r.status);
}

std::string csv(const std::vector<ResultRecord>& records) {
  std::string out = csv_header();
  for (const auto& r : records) out += csv_row(r);
  return out;
}

std::string table(const std::vector<ResultRecord>& records) {
  std::string out = fmt::format("{:<28} {:>9} {:>34} {:>34} {:>10} {:>7} {:>8}\n", "scenario", "analytic", "pairing",
                                "topological", "abs_err", "status", "time[s]");
  for (const auto& r : records) {
    if (r.status == "error") {
      out += fmt::format("{:<28} error: {}\n", r.scenario, r.message);
      continue;
    }
    out += fmt::format("{:<28} {:>9} {:>34} {:>34} {:>10.2e} {:>7} {:>8.2f}\n", r.scenario,
                       fmt::format("{}", fmt::join(r.analytic, ";")), format_complex(r.pairing),
                       format_complex(r.topological), r.abs_err, r.status, r.wall_seconds);
    for (const auto& [k, v] : r.details) out += fmt::format("{:<28}   {} = {}\n", "", k, v);
  }
  return out;
}

}  // namespace leafindex
