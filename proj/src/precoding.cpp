// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/precoding.hpp"

#include <cmath>
#include <string>

namespace hetsim {

namespace {

double mrt_alpha_sq(double power, int antennas, const arma::vec& beta_hat, const char* node) {
  const double phi = arma::accu(beta_hat);
  if (!(phi > 0.0))
    throw DegenerateInputError(std::string("precoder_alphas: zero effective gain at ") + node);
  return power / (static_cast<double>(antennas) * phi);
}

// The pseudo-inverse Gram is complex Wishart, so E[Tr{(G^H G)^-1}] = Psi/(n-m)
// and the statistical power constraint pins alpha^2 = (n - m) p / Psi.
double zft_alpha_sq(double power, int antennas, const arma::vec& beta_hat, const char* node) {
  const int users = static_cast<int>(beta_hat.n_elem);
  if (antennas < users + 2)
    throw ConfigError(std::string("precoder_alphas: ZFT needs antennas >= users + 2 at ") + node);
  double psi = 0.0;
  for (double b : beta_hat) {
    if (!(b > 0.0))
      throw DegenerateInputError(std::string("precoder_alphas: zero effective gain at ") + node);
    psi += 1.0 / b;
  }
  return static_cast<double>(antennas - users) * power / psi;
}

// conj(G (G^H G)^-1); reports the Gram condition number on failure.
arma::cx_mat zf_directions(const arma::cx_mat& g_hat, const char* node) {
  const arma::cx_mat gram = g_hat.t() * g_hat;
  arma::cx_mat gram_inv;
  if (!arma::inv_sympd(gram_inv, gram)) {
    const double kappa = arma::cond(gram);
    throw NumericalError(std::string("zft: rank-deficient estimate at ") + node +
                         ", Gram condition number " + std::to_string(kappa));
  }
  return arma::conj(g_hat * gram_inv);
}

}  // namespace

Alphas precoder_alphas(const Scenario& s, const EffectiveGains& gains, PrecoderKind kind) {
  Alphas a;
  a.sc_sq.zeros(s.num_sc());
  const bool mrt = kind == PrecoderKind::kMrt;
  if (s.num_mue() > 0) {
    a.bs_sq = mrt ? mrt_alpha_sq(s.p_bs, s.n_bs, gains.bm, "BS")
                  : zft_alpha_sq(s.p_bs, s.n_bs, gains.bm, "BS");
  }
  for (int m = 0; m < s.num_sc(); ++m) {
    if (s.num_sue(m) == 0) continue;
    a.sc_sq(m) = mrt ? mrt_alpha_sq(s.p_sc[m], s.n_sc, gains.ss_own[m], "SC")
                     : zft_alpha_sq(s.p_sc[m], s.n_sc, gains.ss_own[m], "SC");
  }
  return a;
}

Precoder make_precoder(PrecoderKind kind, const ChannelEstimate& est, const Scenario& s,
                       const Alphas& alphas) {
  Precoder p;
  p.kind = kind;
  p.alpha_bs = std::sqrt(alphas.bs_sq);
  p.alpha_sc = arma::sqrt(alphas.sc_sq);
  if (kind == PrecoderKind::kMrt) {
    p.w_bs = p.alpha_bs * arma::conj(est.g_hat_bm);
    p.w_sc.resize(s.num_sc());
    for (int m = 0; m < s.num_sc(); ++m) p.w_sc[m] = p.alpha_sc(m) * arma::conj(est.g_hat_ss[m]);
    return p;
  }
  p.w_bs = s.num_mue() > 0 ? arma::cx_mat(p.alpha_bs * zf_directions(est.g_hat_bm, "BS"))
                           : arma::cx_mat(s.n_bs, 0);
  p.w_sc.resize(s.num_sc());
  for (int m = 0; m < s.num_sc(); ++m) {
    p.w_sc[m] = s.num_sue(m) > 0
                    ? arma::cx_mat(p.alpha_sc(m) * zf_directions(est.g_hat_ss[m], "SC"))
                    : arma::cx_mat(s.n_sc, 0);
  }
  return p;
}

}  // namespace hetsim
