// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_CHANNEL_HPP
#define HETSIM_CHANNEL_HPP

#include <armadillo>
#include <vector>

#include "hetsim/rng.hpp"
#include "hetsim/scenario.hpp"

namespace hetsim {

// One small-scale realization of every node->user channel family,
// G = H D^{1/2} with i.i.d. CN(0,1) entries in H. Column j of a family
// has per-entry variance equal to the matching large-scale gain.
struct ChannelDraw {
  arma::cx_mat g_bm;                            // N_BS x K
  std::vector<arma::cx_mat> g_bs;               // S of N_BS x L_m
  std::vector<arma::cx_mat> g_sm;               // S of N_SC x K
  std::vector<std::vector<arma::cx_mat>> g_ss;  // [n][m] of N_SC x L_m
};

// Fills a matrix with independent CN(0, beta(col)) columns.
void fill_cgauss_columns(arma::cx_mat& out, const arma::vec& beta, Rng& rng);

// Draw order is fixed (g_bm, g_bs by m, g_sm by n, g_ss by n then m) so that
// a given seed yields a bit-identical realization.
ChannelDraw draw_channels(const Scenario& scenario, Rng& rng);

// i.i.d. CN(0, sigma0_sq) matrix.
arma::cx_mat draw_noise(int rows, int cols, double sigma0_sq, Rng& rng);

}  // namespace hetsim

#endif  // HETSIM_CHANNEL_HPP
