// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_TRAINING_HPP
#define HETSIM_TRAINING_HPP

#include <armadillo>
#include <utility>
#include <vector>

#include "hetsim/channel.hpp"
#include "hetsim/scenario.hpp"

namespace hetsim {

// Orthonormal pilot rows drawn from a tau x tau DFT matrix: K rows for the
// MUEs and gamma disjoint blocks of L rows for the SUE pilot sets, so every
// orthogonality condition holds to machine precision.
struct PilotPlan {
  int reuse = 1;
  int tau = 0;
  arma::cx_mat mue;                // K x tau
  std::vector<arma::cx_mat> sue;   // gamma entries of L x tau
};

PilotPlan build_pilots(int n_mue, int n_sue, int reuse);

// Effective estimated gains. ss_cross[n][m](j) is the variance weight that
// the channel from SC n to the j-th SUE of co-pilot cell m carries inside
// SC n's own estimate; it is only populated for co-pilot pairs.
struct EffectiveGains {
  arma::vec bm;                                 // K
  std::vector<arma::vec> ss_own;                // [m](j)
  std::vector<std::vector<arma::vec>> ss_cross; // [n][m](j), co-pilot pairs
};

EffectiveGains effective_gains(const Scenario& scenario);

// Uplink training observations at the BS and at each SC.
struct TrainingSignals {
  arma::cx_mat y_bs;               // N_BS x tau
  std::vector<arma::cx_mat> y_sc;  // S of N_SC x tau
};

TrainingSignals receive_training(const ChannelDraw& draw, const PilotPlan& plan,
                                 const Scenario& scenario, Rng& rng);

// MMSE estimates of the serving-link channels.
struct ChannelEstimate {
  arma::cx_mat g_hat_bm;               // N_BS x K
  std::vector<arma::cx_mat> g_hat_ss;  // S of N_SC x L_m
};

ChannelEstimate mmse_estimate(const TrainingSignals& signals, const PilotPlan& plan,
                              const Scenario& scenario);

enum class EstimationMode {
  kPipeline,  // simulate the training reception and run MMSE on it
  kDirect,    // sample (estimate, error) from their joint statistics
};

// One Monte-Carlo channel realization together with its estimates. The
// direct mode is only valid without pilot reuse (gamma = S) or with perfect
// CSI; under reuse the co-pilot estimates are correlated with interfering
// channels and the full pipeline is mandatory.
std::pair<ChannelDraw, ChannelEstimate> draw_trial(const Scenario& scenario,
                                                   const EffectiveGains& gains,
                                                   EstimationMode mode, Rng& rng);

// Largest per-cell SUE count (pilot sets are sized for it).
int max_sue(const Scenario& scenario);

}  // namespace hetsim

#endif  // HETSIM_TRAINING_HPP
