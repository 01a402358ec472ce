// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_EXPERIMENT_HPP
#define HETSIM_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "hetsim/config.hpp"
#include "hetsim/geometry.hpp"
#include "hetsim/scheduling.hpp"

namespace hetsim {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Deterministic outputs go to the CSV; run bookkeeping (retries, wall time)
// goes to the metadata sidecar so that identical (config, seed) runs stay
// byte-identical.
struct RunInfo {
  std::uint64_t cfg_hash = 0;
  std::uint64_t seed = 0;
  std::string version;
  int workers = 0;
  int trials = 0;
  int drops = 0;
  std::vector<int> point_retries;
  std::vector<int> point_feasible;
  double runtime_seconds = 0.0;
};

struct ExperimentResult {
  ResultTable table;
  RunInfo info;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

void write_csv(const ResultTable& table, const std::string& path);
void write_metadata(const ExperimentConfig& config, const RunInfo& info,
                    const std::string& csv_path);

// Candidate pool for one user drop; resamples the drop until every cell has
// enough candidates (bounded retries).
struct DropData {
  CandidatePool pool;
  int retries = 0;
};
DropData make_drop(const ExperimentConfig& config, std::uint64_t point_key, int drop_index,
                   double p_bs_mw, double p_sc_mw, int max_attempts = 100);

// One-tier reference: a single array with N_BS + S*N_SC antennas serving the
// union of the scheduled two-tier users with orthogonal training.
Scenario one_tier_scenario(const ExperimentConfig& config, const CandidatePool& pool,
                           const SystemContext& ctx, const Schedule& schedule);

}  // namespace hetsim

#endif  // HETSIM_EXPERIMENT_HPP
