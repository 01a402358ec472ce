// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/training.hpp"

#include <cmath>

namespace hetsim {

namespace {

// Denominator of the effective-gain closed forms at SC n, pilot j:
// tau*p * sum of the co-pilot contaminator gains seen by node n, plus noise.
double contamination_denominator(const Scenario& s, int n, int j, double tau_p) {
  double sum = 0.0;
  for (int l : s.groups[s.group_of(n)]) {
    if (s.num_sue(l) > j) sum += s.beta_ss[n][l](j);
  }
  return tau_p * sum + s.noise;
}

}  // namespace

int max_sue(const Scenario& s) {
  int lmax = 0;
  for (int m = 0; m < s.num_sc(); ++m) lmax = std::max(lmax, s.num_sue(m));
  return lmax;
}

PilotPlan build_pilots(int n_mue, int n_sue, int reuse) {
  if (n_mue < 0 || n_sue < 0 || reuse < 1) throw ConfigError("build_pilots: invalid sizes");
  PilotPlan plan;
  plan.reuse = reuse;
  plan.tau = n_mue + n_sue * reuse;
  const int tau = plan.tau;
  arma::cx_mat dft(tau, tau);
  const double scale = 1.0 / std::sqrt(static_cast<double>(tau));
  for (int r = 0; r < tau; ++r) {
    for (int c = 0; c < tau; ++c) {
      const double phase = -6.283185307179586476925286766559 *
                           static_cast<double>(r) * static_cast<double>(c) /
                           static_cast<double>(tau);
      dft(r, c) = std::complex<double>(scale * std::cos(phase), scale * std::sin(phase));
    }
  }
  plan.mue = n_mue > 0 ? arma::cx_mat(dft.rows(0, n_mue - 1)) : arma::cx_mat(0, tau);
  plan.sue.resize(reuse);
  for (int r = 0; r < reuse; ++r) {
    if (n_sue > 0) {
      const int first = n_mue + r * n_sue;
      plan.sue[r] = dft.rows(first, first + n_sue - 1);
    } else {
      plan.sue[r] = arma::cx_mat(0, tau);
    }
  }
  return plan;
}

EffectiveGains effective_gains(const Scenario& s) {
  EffectiveGains g;
  const int n_cells = s.num_sc();
  if (s.perfect_csi) {
    g.bm = s.beta_bm;
    g.ss_own.resize(n_cells);
    for (int m = 0; m < n_cells; ++m) g.ss_own[m] = s.beta_ss.empty() ? arma::vec() : s.beta_ss[m][m];
    g.ss_cross.assign(n_cells, std::vector<arma::vec>(n_cells));
    return g;
  }
  const double tau_p = static_cast<double>(s.tau) * s.p_pilot;
  g.bm.set_size(s.num_mue());
  for (int i = 0; i < s.num_mue(); ++i) {
    const double beta = s.beta_bm(i);
    g.bm(i) = tau_p * beta * beta / (tau_p * beta + s.noise);
  }
  g.ss_own.resize(n_cells);
  g.ss_cross.assign(n_cells, std::vector<arma::vec>(n_cells));
  for (int n = 0; n < n_cells; ++n) {
    g.ss_own[n].set_size(s.num_sue(n));
    for (int j = 0; j < s.num_sue(n); ++j) {
      const double beta = s.beta_ss[n][n](j);
      g.ss_own[n](j) = tau_p * beta * beta / contamination_denominator(s, n, j, tau_p);
    }
    for (int m : s.copilots(n)) {
      g.ss_cross[n][m].zeros(s.num_sue(m));
      for (int j = 0; j < s.num_sue(m); ++j) {
        if (j >= s.num_sue(n)) continue;  // node n never estimates pilot j
        const double beta = s.beta_ss[n][m](j);
        g.ss_cross[n][m](j) = tau_p * beta * beta / contamination_denominator(s, n, j, tau_p);
      }
    }
  }
  return g;
}

TrainingSignals receive_training(const ChannelDraw& draw, const PilotPlan& plan,
                                 const Scenario& s, Rng& rng) {
  const int n_cells = s.num_sc();
  const double amp = std::sqrt(static_cast<double>(s.tau) * s.p_pilot);
  TrainingSignals out;

  arma::cx_mat signal_bs(s.n_bs, plan.tau, arma::fill::zeros);
  if (s.num_mue() > 0) signal_bs += draw.g_bm * plan.mue;
  for (std::size_t t = 0; t < s.groups.size(); ++t) {
    for (int l : s.groups[t]) {
      const int lm = s.num_sue(l);
      if (lm > 0) signal_bs += draw.g_bs[l] * plan.sue[t].rows(0, lm - 1);
    }
  }
  out.y_bs = amp * signal_bs + draw_noise(s.n_bs, plan.tau, s.noise, rng);

  out.y_sc.resize(n_cells);
  for (int m = 0; m < n_cells; ++m) {
    arma::cx_mat signal(s.n_sc, plan.tau, arma::fill::zeros);
    for (std::size_t t = 0; t < s.groups.size(); ++t) {
      for (int l : s.groups[t]) {
        const int lm = s.num_sue(l);
        if (lm > 0) signal += draw.g_ss[m][l] * plan.sue[t].rows(0, lm - 1);
      }
    }
    if (s.num_mue() > 0) signal += draw.g_sm[m] * plan.mue;
    out.y_sc[m] = amp * signal + draw_noise(s.n_sc, plan.tau, s.noise, rng);
  }
  return out;
}

ChannelEstimate mmse_estimate(const TrainingSignals& signals, const PilotPlan& plan,
                              const Scenario& s) {
  const int n_cells = s.num_sc();
  const double tau_p = static_cast<double>(s.tau) * s.p_pilot;
  ChannelEstimate est;
  if (tau_p <= 0.0) {
    est.g_hat_bm.zeros(s.n_bs, s.num_mue());
    est.g_hat_ss.resize(n_cells);
    for (int m = 0; m < n_cells; ++m) est.g_hat_ss[m].zeros(s.n_sc, s.num_sue(m));
    return est;
  }
  const double inv_amp = 1.0 / std::sqrt(tau_p);

  est.g_hat_bm = inv_amp * (signals.y_bs * plan.mue.t());
  for (int i = 0; i < s.num_mue(); ++i) {
    const double beta = s.beta_bm(i);
    est.g_hat_bm.col(i) *= tau_p * beta / (tau_p * beta + s.noise);
  }

  est.g_hat_ss.resize(n_cells);
  for (int m = 0; m < n_cells; ++m) {
    const int lm = s.num_sue(m);
    if (lm == 0) {
      est.g_hat_ss[m].set_size(s.n_sc, 0);
      continue;
    }
    const arma::cx_mat pilots = plan.sue[s.group_of(m)].rows(0, lm - 1);
    est.g_hat_ss[m] = inv_amp * (signals.y_sc[m] * pilots.t());
    for (int j = 0; j < lm; ++j) {
      const double beta = s.beta_ss[m][m](j);
      est.g_hat_ss[m].col(j) *= tau_p * beta / contamination_denominator(s, m, j, tau_p);
    }
  }
  return est;
}

std::pair<ChannelDraw, ChannelEstimate> draw_trial(const Scenario& s, const EffectiveGains& gains,
                                                   EstimationMode mode, Rng& rng) {
  const int n_cells = s.num_sc();
  if (s.perfect_csi) {
    ChannelDraw draw = draw_channels(s, rng);
    ChannelEstimate est;
    est.g_hat_bm = draw.g_bm;
    est.g_hat_ss.resize(n_cells);
    for (int m = 0; m < n_cells; ++m) est.g_hat_ss[m] = draw.g_ss[m][m];
    return {std::move(draw), std::move(est)};
  }
  if (mode == EstimationMode::kPipeline) {
    ChannelDraw draw = draw_channels(s, rng);
    const PilotPlan plan = build_pilots(s.num_mue(), max_sue(s), s.reuse);
    const TrainingSignals signals = receive_training(draw, plan, s, rng);
    ChannelEstimate est = mmse_estimate(signals, plan, s);
    return {std::move(draw), std::move(est)};
  }
  // Direct sampling of (estimate, error) pairs. Only valid when estimates at
  // distinct cells are independent, i.e. one cell per pilot group.
  for (int m = 0; m < n_cells; ++m) {
    if (!s.copilots(m).empty())
      throw ConfigError("draw_trial: direct estimation requires gamma = S (no pilot reuse)");
  }
  ChannelDraw draw;
  ChannelEstimate est;
  est.g_hat_bm.set_size(s.n_bs, s.num_mue());
  fill_cgauss_columns(est.g_hat_bm, gains.bm, rng);
  arma::cx_mat xi(s.n_bs, s.num_mue());
  fill_cgauss_columns(xi, s.beta_bm - gains.bm, rng);
  draw.g_bm = est.g_hat_bm + xi;
  draw.g_bs.resize(n_cells);
  for (int m = 0; m < n_cells; ++m) {
    draw.g_bs[m].set_size(s.n_bs, s.num_sue(m));
    fill_cgauss_columns(draw.g_bs[m], s.beta_bs[m], rng);
  }
  draw.g_sm.resize(n_cells);
  for (int n = 0; n < n_cells; ++n) {
    draw.g_sm[n].set_size(s.n_sc, s.num_mue());
    fill_cgauss_columns(draw.g_sm[n], s.beta_sm[n], rng);
  }
  draw.g_ss.assign(n_cells, std::vector<arma::cx_mat>(n_cells));
  est.g_hat_ss.resize(n_cells);
  for (int n = 0; n < n_cells; ++n) {
    for (int m = 0; m < n_cells; ++m) {
      if (n == m) {
        est.g_hat_ss[n].set_size(s.n_sc, s.num_sue(n));
        fill_cgauss_columns(est.g_hat_ss[n], gains.ss_own[n], rng);
        arma::cx_mat err(s.n_sc, s.num_sue(n));
        fill_cgauss_columns(err, s.beta_ss[n][n] - gains.ss_own[n], rng);
        draw.g_ss[n][n] = est.g_hat_ss[n] + err;
      } else {
        draw.g_ss[n][m].set_size(s.n_sc, s.num_sue(m));
        fill_cgauss_columns(draw.g_ss[n][m], s.beta_ss[n][m], rng);
      }
    }
  }
  return {std::move(draw), std::move(est)};
}

}  // namespace hetsim
