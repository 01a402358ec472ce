// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_RATES_HPP
#define HETSIM_RATES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "hetsim/precoding.hpp"

namespace hetsim {

// The per-user capacity lower bounds are evaluated through two independent
// code routes that must agree to ~1e-10:
//   kMoment      - interference moments assembled with the alpha^2 constants
//                  (the derivation-level, pre-substitution form); canonical.
//   kCoefficient - the compact coefficient form a,b,c,d,e,f.
enum class BoundPath { kMoment, kCoefficient };

// Model for the extra inter-SC interference moment created by pilot sharing
// (MRT only). The two published forms disagree; kEstimateProduct is the one
// the Monte-Carlo interference statistic confirms and is the default.
//   kEstimateProduct: N_SC^2 * beta_hat_own(n,j) * beta_hat_cross(n,m,j)
//   kCrossScaled:     N_SC^2 * beta(n,m,j)       * beta_hat_cross(n,m,j)
enum class CopilotSsiModel { kEstimateProduct, kCrossScaled };

struct BoundOptions {
  BoundPath path = BoundPath::kMoment;
  CopilotSsiModel copilot_ssi = CopilotSsiModel::kEstimateProduct;
};

struct UserRates {
  arma::vec mue;                   // K
  std::vector<arma::vec> sue;      // S of L_m
};

double total_rate(const UserRates& rates);
double min_rate(const UserRates& rates);

UserRates bound_rates(const Scenario& scenario, PrecoderKind kind, const BoundOptions& opts = {});
UserRates bound_rates_with_gains(const Scenario& scenario, const EffectiveGains& gains,
                                 PrecoderKind kind, const BoundOptions& opts = {});

// Expected inter-SC interference power at SUE (m, j) from co-pilot node n
// (the term the two models disagree on, exposed for validation).
double expected_copilot_ssi(const Scenario& scenario, const EffectiveGains& gains, int n, int m,
                            int j, CopilotSsiModel model);

// ---------------------------------------------------------------------------
// Asymptotic limits under power scaling laws.

struct ScalingLaw {
  enum class Case { kFixedPilot, kScaledPilot };  // case I / case II
  Case law_case = Case::kFixedPilot;
  double theta = 0.0;  // pilot power exponent (case II only, 0 < theta <= 1)
  double chi = 1.0;    // SC power exponent:  p_SC = e_sc / N_SC^chi
  double eta = 1.0;    // BS power exponent:  p_BS = e_bs / N_BS^eta
  double e_tau = 1.0;
  double e_bs = 1.0;
  double e_sc = 1.0;
  double lambda = 10.0;  // N_BS / N_SC ratio
};

enum class LimitKind { kFinite, kDiverges, kVanishes };

struct Limit {
  LimitKind kind = LimitKind::kFinite;
  double rate = 0.0;  // bit/s/Hz, meaningful for kFinite (0 for kVanishes)
};

struct AsymptoticReport {
  std::vector<Limit> mue;
  std::vector<std::vector<Limit>> sue;
};

AsymptoticReport asymptotic_rates(const Scenario& scenario, const ScalingLaw& law,
                                  PrecoderKind kind);

// ---------------------------------------------------------------------------
// Monte-Carlo ergodic rates from the exact per-realization SINR terms.

struct McOptions {
  int trials = 1000;
  std::uint64_t master_seed = 1;
  std::uint64_t stream = kStreamMonteCarlo;
  int workers = 1;
  EstimationMode estimation = EstimationMode::kPipeline;
};

struct RateStat {
  double mean = 0.0;
  double std_error = 0.0;
};

struct McReport {
  std::vector<RateStat> mue;
  std::vector<std::vector<RateStat>> sue;
  RateStat network;  // per-trial sum over all users (captures correlations)
};

double total_rate(const McReport& report);

McReport mc_rates(const Scenario& scenario, PrecoderKind kind, const McOptions& opts);

// Per-user achievable rates for one realization (exposed so tests can probe
// individual interference terms).
arma::vec trial_user_rates(const Scenario& scenario, const ChannelDraw& draw,
                           const ChannelEstimate& estimate, const Precoder& precoder);

// ---------------------------------------------------------------------------
// Network spectral efficiency with the training-overhead prefactor.
double spectral_efficiency(double sum_rate, int coherence, int tau);

// ---------------------------------------------------------------------------
// Transmit power required to reach a per-user rate target.
//
// The default solves each tier against the target with the other tier
// silent, which is what the reference power-requirement curves assume; the
// coupled mode alternates 1-D bisections until the joint residual falls
// under tol_db. With overhead_adjusted the target counts the (T-tau)/T
// training prefactor, so the bound itself must reach target*T/(T-tau).
struct RequiredPowerOptions {
  bool coupled = false;
  bool overhead_adjusted = true;
  double tol_db = 1e-6;
  int max_sweeps = 200;
  double lo_dbm = -300.0;
  double hi_dbm = 300.0;
};

struct RequiredPower {
  bool feasible_bs = false;
  bool feasible_sc = false;
  double p_bs = 0.0;  // linear
  double p_sc = 0.0;  // linear
  double residual_db = 0.0;
  int sweeps = 0;
};

RequiredPower required_power(Scenario scenario, double target_rate, PrecoderKind kind,
                             const RequiredPowerOptions& opts = {});

// Runs fn(0..count-1) across the given number of workers; the result of the
// computation must not depend on the execution order.
void run_parallel(int workers, int count, const std::function<void(int)>& fn);

}  // namespace hetsim

#endif  // HETSIM_RATES_HPP
