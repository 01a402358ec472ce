// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_CONFIG_HPP
#define HETSIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hetsim/rates.hpp"
#include "hetsim/scenario.hpp"

namespace hetsim {

// Experiment configuration, a flat key = value file with defaults matching
// the standard simulation parameter set (20 MHz, 1000 m cell, 800 m SC ring,
// T = 200, 22 dB BS/SC power offset, -174 dBm/Hz noise, K = 20, L = 4,
// bias 1.0/1.2, lambda = 10). See README for the key list.
struct ExperimentConfig {
  enum class Kind { kRateSweep, kPrSweep, kPowerScaling, kScheduling, kOneTier };
  enum class Algorithm { kRsa, kGsa, kAsa };
  enum class ScPlacement { kRing, kUniform };

  // topology
  int s = 8;
  double cell_radius_m = 1000.0;
  double ring_radius_m = 800.0;
  int users = 0;  // 0 -> 200 for S = 8, 500 for S = 20, else 25 * S
  bool one_tier = false;
  ScPlacement sc_placement = ScPlacement::kRing;

  // antennas
  int n_bs = 160;
  int n_sc = 0;  // 0 -> n_bs / lambda
  double lambda = 10.0;

  // powers (dBm / dB at the boundary)
  double p_bs_dbm = 46.0;
  double sc_offset_db = 22.0;
  double p_pilot_dbm = 0.0;
  double noise_density_dbm_hz = -174.0;
  double bandwidth_hz = 20e6;

  // pilot
  int reuse = 0;  // 0 -> S (no reuse)
  int coherence = 200;

  // scheduling
  int k = 20;
  int l = 4;
  Algorithm algorithm = Algorithm::kRsa;
  double kappa_bs = 1.0;
  double kappa_sc = 1.2;

  // Monte-Carlo
  int trials = 500;
  std::uint64_t seed = 1;
  int workers = 1;
  EstimationMode estimation = EstimationMode::kPipeline;
  bool run_mc = true;

  // precoders
  bool run_mrt = true;
  bool run_zft = true;

  // experiment
  Kind kind = Kind::kRateSweep;
  std::vector<double> sweep_values;  // empty -> per-kind default
  int drops = 10;
  bool pin_drops = false;
  std::vector<int> gamma_list;  // power-scaling curves; empty -> {1,2,4,8}
  double target_rate = 1.0;     // bit/s/Hz per user for required-power runs

  // fixed large-scale gain table (scaling-law studies)
  bool use_gain_table = false;
  GainTable gain_table;
  double table_noise = 1.0;
  double table_p_pilot = 1.0;

  // power scaling law
  ScalingLaw law;

  // ------------------------------------------------------------------
  int derived_users() const;
  int derived_n_sc() const;
  int derived_reuse() const;
  int tau() const { return k + l * derived_reuse(); }
  double noise_mw() const;
  double p_bs_mw() const { return dbm_to_mw(p_bs_dbm); }
  double p_sc_mw() const { return dbm_to_mw(p_bs_dbm - sc_offset_db); }
  double p_pilot_mw() const { return dbm_to_mw(p_pilot_dbm); }

  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);

// Canonical text rendering; also the config-hash input.
std::string canonical_dump(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace hetsim

#endif  // HETSIM_CONFIG_HPP
