// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetsim/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hetsim - two-tier massive-MIMO downlink experiments"};

  std::string config_path;
  std::string out_path = "result.csv";
  std::string experiment;
  std::vector<std::string> overrides;
  long long seed = -1;
  int trials = -1;
  int workers = -1;
  bool echo = false;

  app.add_option("--config", config_path, "experiment configuration file (key = value)");
  app.add_option("--out", out_path, "output CSV path (metadata sidecar <out>.meta.json)");
  app.add_option("--seed", seed, "master seed override");
  app.add_option("--trials", trials, "Monte-Carlo trials override");
  app.add_option("--workers", workers, "worker thread count override");
  app.add_option("--experiment", experiment,
                 "experiment kind: rate-sweep, pr-sweep, power-scaling, scheduling, one-tier");
  app.add_option("--set", overrides, "extra key=value overrides (repeatable)");
  app.add_flag("--echo-config", echo, "print the resolved configuration and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    hetsim::ExperimentConfig cfg =
        config_path.empty() ? hetsim::ExperimentConfig{} : hetsim::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (trials > 0) cfg.trials = trials;
    if (workers > 0) cfg.workers = workers;
    if (!experiment.empty()) hetsim::apply_override(cfg, "experiment.kind", experiment);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw hetsim::ConfigError("--set expects key=value, got '" + kv + "'");
      hetsim::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();

    if (echo) {
      std::cout << hetsim::canonical_dump(cfg);
      std::printf("# derived: tau = %d, noise = %.6g mW, p_sc = %.6g dBm\n", cfg.tau(),
                  cfg.noise_mw(), cfg.p_bs_dbm - cfg.sc_offset_db);
      return 0;
    }

    const hetsim::ExperimentResult result = hetsim::run_experiment(cfg);
    hetsim::write_csv(result.table, out_path);
    hetsim::write_metadata(cfg, result.info, out_path);

    int infeasible = 0;
    for (int f : result.info.point_feasible) infeasible += f == 0;
    std::printf("wrote %zu rows to %s (%d infeasible points, %.2f s)\n", result.table.rows.size(),
                out_path.c_str(), infeasible, result.info.runtime_seconds);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
