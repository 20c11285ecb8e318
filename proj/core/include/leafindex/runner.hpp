// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "leafindex/error.hpp"
#include "leafindex/scenario.hpp"

namespace leafindex {

struct RunOptions {
  std::filesystem::path cache_dir;  // empty: no operator cache
  std::optional<double> tol;        // overrides pairing_tol
  std::optional<std::uint64_t> seed;
};

struct ResultRecord {
  std::string scenario;
  std::vector<int> analytic;  // per base point (the quotient operator for quotient-oracle runs)
  cplx pairing = 0.0;
  cplx topological = 0.0;
  double abs_err = 0.0;
  bool pass = false;
  std::string status;  // pass | fail | error
  std::string stage;   // failing stage for errors
  std::string message;
  ErrorKind error_kind = ErrorKind::internal;
  std::vector<std::pair<std::string, std::string>> details;  // extra comparisons
  double wall_seconds = 0.0;
};

// Error wrapper naming the stage of run_scenario that failed.
Error stage_error(const std::string& stage, const Error& e);

ResultRecord run_scenario(const Scenario& s, const RunOptions& opt = {});

// Runs scenarios on `workers` threads; records come back in input order and
// errors are captured in the records.
std::vector<ResultRecord> run_scenarios(const std::vector<Scenario>& scenarios, int workers,
                                        const RunOptions& opt = {});

// LEAFINDEX_WORKERS, default 1.
int worker_count();

std::string format_complex(cplx v);
std::string csv_header();
std::string csv_row(const ResultRecord& r);
std::string csv(const std::vector<ResultRecord>& records);
std::string table(const std::vector<ResultRecord>& records);

}  // namespace leafindex
