// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
//
// leafindex run | suite | list
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "leafindex/error.hpp"
#include "leafindex/properties.hpp"
#include "leafindex/runner.hpp"
#include "leafindex/scenario.hpp"

namespace fs = std::filesystem;
using namespace leafindex;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitCorrupt = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  if (!out) fail(ErrorKind::io, fmt::format("write to '{}' failed", path.string()));
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
}

int scenario_status(const std::vector<ResultRecord>& records) {
  int code = 0;
  for (const auto& r : records) {
    if (r.status == "error" && r.error_kind == ErrorKind::corrupt_cache) return kExitCorrupt;
    if (r.status != "pass") code = kExitFail;
  }
  return code;
}

void report(const std::vector<ResultRecord>& records) {
  std::cout << table(records);
  for (const auto& r : records)
    if (r.status == "error") std::cerr << fmt::format("{}: {}\n", r.scenario, r.message);
}

int run_scenario_files(const std::vector<Scenario>& scenarios, const fs::path& out, const RunOptions& opt,
                       const std::string& stem) {
  prepare_dir(out);
  for (const auto& s : scenarios) write_file(out / (s.name + ".scenario.yaml"), echo_scenario(s));
  auto records = run_scenarios(scenarios, worker_count(), opt);
  write_file(out / (stem + ".csv"), csv(records));
  write_file(out / (stem + ".txt"), table(records));
  report(records);
  return scenario_status(records);
}

int run_invariants(const fs::path& out, std::uint64_t seed) {
  prepare_dir(out);
  auto results = run_properties(seed, worker_count());
  write_file(out / "invariants.csv", properties_csv(results));
  write_file(out / "invariants.txt", properties_table(results));
  std::cout << properties_table(results);
  for (const auto& r : results)
    if (!r.pass) return kExitFail;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index pairings on proper groupoid actions"};
  app.require_subcommand(1);

  std::string scenario_arg, out_dir = ".", which = "all";
  double tol = 0.0;
  std::uint64_t seed = 0, suite_seed = 1;

  auto* run = app.add_subcommand("run", "run one scenario (file or builtin name)");
  run->add_option("--scenario", scenario_arg, "scenario file or builtin name")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  auto* tol_opt = run->add_option("--tol", tol, "override pairing_tol")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");

  auto* suite = app.add_subcommand("suite", "run the invariant checks and/or every builtin scenario");
  suite->add_option("--which", which, "invariants | scenarios | all")
      ->check(CLI::IsMember({"invariants", "scenarios", "all"}));
  suite->add_option("--out", out_dir, "output directory")->required();
  suite->add_option("--seed", suite_seed, "seed for the invariant checks");

  auto* list = app.add_subcommand("list", "print the builtin catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : builtin_names()) std::cout << fmt::format("{:<28} {}\n", name, builtin_description(name));
      return 0;
    }
    if (run->parsed()) {
      RunOptions opt;
      opt.cache_dir = fs::path(out_dir) / "cache";
      if (*tol_opt) opt.tol = tol;
      if (*seed_opt) opt.seed = seed;
      prepare_dir(opt.cache_dir);
      Scenario s = load_scenario(scenario_arg);
      return run_scenario_files({s}, out_dir, opt, s.name);
    }
    int code = 0;
    if (which == "invariants" || which == "all") code = std::max(code, run_invariants(out_dir, suite_seed));
    if (which == "scenarios" || which == "all") {
      RunOptions opt;
      opt.cache_dir = fs::path(out_dir) / "cache";
      prepare_dir(opt.cache_dir);
      std::vector<Scenario> all;
      for (const auto& name : builtin_names()) all.push_back(*builtin_scenario(name));
      code = std::max(code, run_scenario_files(all, out_dir, opt, "scenarios"));
    }
    return code;
  } catch (const Error& e) {
    std::cerr << fmt::format("error ({}): {}\n", to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::corrupt_cache ? kExitCorrupt : kExitFail;
  }
}
