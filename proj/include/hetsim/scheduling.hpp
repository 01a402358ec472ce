// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_SCHEDULING_HPP
#define HETSIM_SCHEDULING_HPP

#include <vector>

#include "hetsim/rates.hpp"

namespace hetsim {

// Large-scale gains of every candidate user, before selection.
// beta_ss[n][m](v) is the gain from SC node n to the v-th candidate of
// cell m; beta_bs[m](v) the gain from the BS to that candidate.
struct CandidatePool {
  arma::vec beta_bm;                            // macro candidates
  std::vector<arma::vec> beta_sm;               // S of |U_M|
  std::vector<arma::vec> beta_bs;               // S of |U_S^m|
  std::vector<std::vector<arma::vec>> beta_ss;  // [n][m] of |U_S^m|
  int num_sc() const { return static_cast<int>(beta_bs.size()); }
  int num_macro_candidates() const { return static_cast<int>(beta_bm.n_elem); }
  int num_cell_candidates(int m) const { return static_cast<int>(beta_bs[m].n_elem); }
};

// System quantities shared by every tentative schedule.
struct SystemContext {
  int n_bs = 0;
  int n_sc = 0;
  int reuse = 1;
  int tau = 0;
  int coherence = 200;
  bool perfect_csi = false;
  double p_bs = 0.0;
  double p_pilot = 0.0;
  double noise = 0.0;
  std::vector<double> p_sc;
};

struct Schedule {
  std::vector<int> mue;               // selected macro candidates, addition order
  std::vector<std::vector<int>> sue;  // per-cell selections, addition order
  double objective = 0.0;             // sum-rate value of the final selection
};

// Scenario restricted to the given candidate selections.
Scenario select_scenario(const CandidatePool& pool, const SystemContext& ctx,
                         const std::vector<int>& mue_sel,
                         const std::vector<std::vector<int>>& sue_sel);

// Sum-rate objective (T - tau)/T * sum of per-user capacity lower bounds,
// well defined for partially filled selections; empty cells contribute
// neither rate nor interference.
double sum_rate_objective(const CandidatePool& pool, const SystemContext& ctx, PrecoderKind kind,
                          const std::vector<int>& mue_sel,
                          const std::vector<std::vector<int>>& sue_sel);

// Uniform random selection without replacement.
Schedule rsa(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
             PrecoderKind kind, Rng& rng);

// Greedy sum-rate scheduling: rounds of floor(K/L) MUE additions followed by
// one SUE per cell, then a final K mod L MUE pass. Each addition maximizes
// the total objective given everything selected so far; ties break toward
// the lowest candidate index.
Schedule gsa(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
             PrecoderKind kind);

// Per-cell greedy on the asymptotic MRT rates; no cross-cell information.
Schedule asa_mrt(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
                 const ScalingLaw& law);

// Largest-gain selection (top-K / top-L), optimal for the asymptotic ZFT
// objective; ties break toward the lowest candidate index.
Schedule asa_zft(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
                 const ScalingLaw& law);

}  // namespace hetsim

#endif  // HETSIM_SCHEDULING_HPP
