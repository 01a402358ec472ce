// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_SCENARIO_HPP
#define HETSIM_SCENARIO_HPP

#include <armadillo>
#include <vector>

#include "hetsim/common.hpp"

namespace hetsim {

// Everything the rate/precoding machinery needs after scheduling: antenna
// counts, powers, the pilot-reuse structure and the large-scale gains of the
// scheduled users. Per-cell SUE counts may differ (partial schedules during
// greedy selection); a full schedule has |J_m| = L for all m.
//
// Index convention: beta_ss[n][m](j) is the gain from SC node n to the j-th
// scheduled SUE of cell m. All gains are linear, powers in mW (or normalized
// units for the fixed-gain studies).
struct Scenario {
  int n_bs = 0;                 // BS antennas
  int n_sc = 0;                 // SC antennas
  int reuse = 1;                // pilot reuse factor gamma
  int tau = 0;                  // training length
  int coherence = 200;          // coherence interval T in symbols
  bool perfect_csi = false;     // skip training, estimates equal true channels

  double p_bs = 0.0;            // BS transmit power
  std::vector<double> p_sc;     // per-SC transmit power, size S
  double p_pilot = 0.0;         // per-symbol pilot power
  double noise = 0.0;           // sigma_0^2

  arma::vec beta_bm;                              // K
  std::vector<arma::vec> beta_sm;                 // S entries of length K
  std::vector<arma::vec> beta_bs;                 // S entries of length L_m
  std::vector<std::vector<arma::vec>> beta_ss;    // [n][m] of length L_m

  std::vector<std::vector<int>> groups;           // pilot groups, 0-based SC ids

  int num_sc() const { return static_cast<int>(beta_bs.size()); }
  int num_mue() const { return static_cast<int>(beta_bm.n_elem); }
  int num_sue(int m) const { return static_cast<int>(beta_bs[m].n_elem); }
  int num_users() const;
  int group_of(int m) const;
  // Co-pilot partners of cell m (same pilot group, excluding m). Empty when
  // perfect CSI is assumed or when gamma = S.
  std::vector<int> copilots(int m) const;

  void validate() const;
};

// Arithmetic-progression pilot grouping: group r = {r, r+gamma, ...} (0-based).
std::vector<std::vector<int>> pilot_groups(int n_sc_nodes, int reuse);

// Fully symmetric scenario built from a fixed large-scale gain table; every
// cell serves n_sue users, every MUE shares beta_bm and so on.
struct GainTable {
  double bm = 1.0;        // BS -> MUE
  double bs = 0.2;        // BS -> SUE
  double ss_own = 5.0;    // SC -> own SUE
  double ss_cross = 0.6;  // SC -> other cell's SUE
  double sm = 0.6;        // SC -> MUE
};

Scenario symmetric_scenario(int n_sc_nodes, int n_mue, int n_sue, int n_bs, int n_sc, int reuse,
                            const GainTable& gains, double p_bs, double p_sc, double p_pilot,
                            double noise, int coherence = 200);

}  // namespace hetsim

#endif  // HETSIM_SCENARIO_HPP
