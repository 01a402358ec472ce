// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_PRECODING_HPP
#define HETSIM_PRECODING_HPP

#include <armadillo>
#include <vector>

#include "hetsim/training.hpp"

namespace hetsim {

enum class PrecoderKind { kMrt, kZft };

// Squared normalization constants. These depend only on statistical CSI so
// they are fixed across Monte-Carlo trials; the same constants feed the
// closed-form bounds. Cells with no scheduled users carry alpha = 0.
struct Alphas {
  double bs_sq = 0.0;
  arma::vec sc_sq;
};

// MRT: alpha_BS^2 = p_BS / (N_BS * sum_i beta_hat_BM(i)), per-SC analogous.
// ZFT: alpha_BS^2 = (N_BS - K - 1) p_BS / sum_i (1 / beta_hat_BM(i)).
Alphas precoder_alphas(const Scenario& scenario, const EffectiveGains& gains, PrecoderKind kind);

struct Precoder {
  PrecoderKind kind = PrecoderKind::kMrt;
  double alpha_bs = 0.0;
  arma::vec alpha_sc;
  arma::cx_mat w_bs;                // N_BS x K
  std::vector<arma::cx_mat> w_sc;   // S of N_SC x L_m
};

// W = alpha * conj(G_hat) for MRT; W = alpha * conj(G_hat (G_hat^H G_hat)^-1)
// for ZFT, with the Gram inverse taken through a Hermitian factorization.
Precoder make_precoder(PrecoderKind kind, const ChannelEstimate& estimate,
                       const Scenario& scenario, const Alphas& alphas);

}  // namespace hetsim

#endif  // HETSIM_PRECODING_HPP
