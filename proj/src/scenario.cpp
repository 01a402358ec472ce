// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/scenario.hpp"

namespace hetsim {

std::vector<std::vector<int>> pilot_groups(int n_sc_nodes, int reuse) {
  if (reuse < 1 || reuse > n_sc_nodes || n_sc_nodes % reuse != 0)
    throw ConfigError("pilot_groups: reuse factor must divide the SC count");
  const int per_group = n_sc_nodes / reuse;
  std::vector<std::vector<int>> groups(reuse);
  for (int r = 0; r < reuse; ++r) {
    groups[r].reserve(per_group);
    for (int k = 0; k < per_group; ++k) groups[r].push_back(r + k * reuse);
  }
  return groups;
}

int Scenario::num_users() const {
  int n = num_mue();
  for (int m = 0; m < num_sc(); ++m) n += num_sue(m);
  return n;
}

int Scenario::group_of(int m) const {
  for (int r = 0; r < static_cast<int>(groups.size()); ++r) {
    for (int id : groups[r]) {
      if (id == m) return r;
    }
  }
  throw ConfigError("Scenario: SC index missing from pilot groups");
}

std::vector<int> Scenario::copilots(int m) const {
  if (perfect_csi) return {};
  std::vector<int> out;
  for (int id : groups[group_of(m)]) {
    if (id != m) out.push_back(id);
  }
  return out;
}

void Scenario::validate() const {
  const int s = num_sc();
  if (n_bs < 0 || n_sc < 0) throw ConfigError("Scenario: negative antenna count");
  if (static_cast<int>(p_sc.size()) != s) throw ConfigError("Scenario: p_sc size mismatch");
  if (static_cast<int>(beta_sm.size()) != s || static_cast<int>(beta_ss.size()) != s)
    throw ConfigError("Scenario: beta tensor size mismatch");
  for (int n = 0; n < s; ++n) {
    if (static_cast<int>(beta_sm[n].n_elem) != num_mue())
      throw ConfigError("Scenario: beta_sm length mismatch");
    if (static_cast<int>(beta_ss[n].size()) != s)
      throw ConfigError("Scenario: beta_ss shape mismatch");
    for (int m = 0; m < s; ++m) {
      if (static_cast<int>(beta_ss[n][m].n_elem) != num_sue(m))
        throw ConfigError("Scenario: beta_ss column length mismatch");
    }
  }
  if (s > 0 && groups.empty()) throw ConfigError("Scenario: missing pilot groups");
  if (noise < 0.0) throw ConfigError("Scenario: negative noise power");
  if (tau > 0 && coherence <= tau) throw ConfigError("Scenario: coherence interval must exceed tau");
}

Scenario symmetric_scenario(int n_sc_nodes, int n_mue, int n_sue, int n_bs, int n_sc, int reuse,
                            const GainTable& gains, double p_bs, double p_sc, double p_pilot,
                            double noise, int coherence) {
  Scenario s;
  s.n_bs = n_bs;
  s.n_sc = n_sc;
  s.reuse = reuse;
  s.tau = n_mue + n_sue * reuse;
  s.coherence = coherence;
  s.p_bs = p_bs;
  s.p_sc.assign(n_sc_nodes, p_sc);
  s.p_pilot = p_pilot;
  s.noise = noise;
  s.beta_bm = arma::vec(n_mue, arma::fill::value(gains.bm));
  s.beta_sm.assign(n_sc_nodes, arma::vec(n_mue, arma::fill::value(gains.sm)));
  s.beta_bs.assign(n_sc_nodes, arma::vec(n_sue, arma::fill::value(gains.bs)));
  s.beta_ss.assign(n_sc_nodes, std::vector<arma::vec>(n_sc_nodes));
  for (int n = 0; n < n_sc_nodes; ++n) {
    for (int m = 0; m < n_sc_nodes; ++m) {
      s.beta_ss[n][m] =
          arma::vec(n_sue, arma::fill::value(n == m ? gains.ss_own : gains.ss_cross));
    }
  }
  s.groups = pilot_groups(n_sc_nodes, reuse);
  s.validate();
  return s;
}

}  // namespace hetsim
