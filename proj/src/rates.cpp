// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace hetsim {

namespace {

constexpr double kExponentTol = 1e-12;

struct StatSums {
  double phi_bm = 0.0;
  double psi_bm = 0.0;
  arma::vec phi_ss;
  arma::vec psi_ss;
};

StatSums stat_sums(const Scenario& s, const EffectiveGains& g) {
  StatSums sums;
  sums.phi_bm = arma::accu(g.bm);
  for (double b : g.bm) sums.psi_bm += b > 0.0 ? 1.0 / b : 0.0;
  sums.phi_ss.zeros(s.num_sc());
  sums.psi_ss.zeros(s.num_sc());
  for (int m = 0; m < s.num_sc(); ++m) {
    sums.phi_ss(m) = arma::accu(g.ss_own[m]);
    for (double b : g.ss_own[m]) sums.psi_ss(m) += b > 0.0 ? 1.0 / b : 0.0;
  }
  return sums;
}

void check_preconditions(const Scenario& s, PrecoderKind kind) {
  if (kind == PrecoderKind::kMrt) {
    if (s.num_mue() > 0 && s.n_bs < 2) throw ConfigError("bound_rates: MRT needs N_BS >= 2");
    for (int m = 0; m < s.num_sc(); ++m) {
      if (s.num_sue(m) > 0 && s.n_sc < 2) throw ConfigError("bound_rates: MRT needs N_SC >= 2");
    }
  } else {
    if (s.num_mue() > 0 && s.n_bs < s.num_mue() + 2)
      throw ConfigError("bound_rates: ZFT needs N_BS >= K + 2");
    for (int m = 0; m < s.num_sc(); ++m) {
      if (s.num_sue(m) > 0 && s.n_sc < s.num_sue(m) + 2)
        throw ConfigError("bound_rates: ZFT needs N_SC >= L + 2");
    }
  }
}

}  // namespace

double total_rate(const UserRates& r) {
  double sum = arma::accu(r.mue);
  for (const auto& v : r.sue) sum += arma::accu(v);
  return sum;
}

double min_rate(const UserRates& r) {
  double lo = arma::datum::inf;
  if (r.mue.n_elem > 0) lo = std::min(lo, r.mue.min());
  for (const auto& v : r.sue) {
    if (v.n_elem > 0) lo = std::min(lo, v.min());
  }
  return lo;
}

double total_rate(const McReport& r) {
  double sum = 0.0;
  for (const auto& u : r.mue) sum += u.mean;
  for (const auto& cell : r.sue) {
    for (const auto& u : cell) sum += u.mean;
  }
  return sum;
}

double expected_copilot_ssi(const Scenario& s, const EffectiveGains& g, int n, int m, int j,
                            CopilotSsiModel model) {
  const double nsc = static_cast<double>(s.n_sc);
  const double weight = model == CopilotSsiModel::kEstimateProduct ? g.ss_own[n](j)
                                                                   : s.beta_ss[n][m](j);
  return nsc * nsc * weight * g.ss_cross[n][m](j);
}

UserRates bound_rates(const Scenario& s, PrecoderKind kind, const BoundOptions& opts) {
  return bound_rates_with_gains(s, effective_gains(s), kind, opts);
}

UserRates bound_rates_with_gains(const Scenario& s, const EffectiveGains& g, PrecoderKind kind,
                                 const BoundOptions& opts) {
  s.validate();
  check_preconditions(s, kind);
  const StatSums sums = stat_sums(s, g);
  const Alphas alphas = precoder_alphas(s, g, kind);
  const int n_cells = s.num_sc();
  const double nbs = static_cast<double>(s.n_bs);
  const double nsc = static_cast<double>(s.n_sc);
  const bool moment = opts.path == BoundPath::kMoment;

  UserRates out;
  out.mue.set_size(s.num_mue());
  out.sue.resize(n_cells);

  if (kind == PrecoderKind::kMrt) {
    for (int i = 0; i < s.num_mue(); ++i) {
      const double beta = s.beta_bm(i);
      const double bhat = g.bm(i);
      double num = 0.0;
      double den = s.noise;
      if (moment) {
        const double chi_hat = sums.phi_bm * (nbs * beta - 2.0 * bhat) -
                               (nbs - 4.0) * bhat * bhat - 2.0 * bhat * beta;
        num = alphas.bs_sq * (nbs - 1.0) * (nbs - 2.0) * bhat * bhat;
        den += alphas.bs_sq * chi_hat;
        // cross-tier moment alpha_n^2 * N_SC * Phi_n * beta cancels exactly
        for (int n = 0; n < n_cells; ++n) {
          if (s.num_sue(n) == 0) continue;
          den += s.p_sc[n] * s.beta_sm[n](i);
        }
      } else {
        const double a = (nbs - 1.0) * (nbs - 2.0) * bhat * bhat / (nbs * sums.phi_bm);
        const double b = beta - 2.0 * bhat / nbs -
                         ((nbs - 4.0) * bhat * bhat + 2.0 * beta * bhat) / (nbs * sums.phi_bm);
        num = a * s.p_bs;
        den += b * s.p_bs;
        for (int n = 0; n < n_cells; ++n) {
          if (s.num_sue(n) == 0) continue;
          den += s.beta_sm[n](i) * s.p_sc[n];
        }
      }
      out.mue(i) = log2_1p(num / den);
    }
    for (int m = 0; m < n_cells; ++m) {
      out.sue[m].set_size(s.num_sue(m));
      const auto copilots = s.copilots(m);
      for (int j = 0; j < s.num_sue(m); ++j) {
        const double beta = s.beta_ss[m][m](j);
        const double bhat = g.ss_own[m](j);
        double num = 0.0;
        double den = s.noise;
        if (moment) {
          const double chi_hat = sums.phi_ss(m) * (nsc * beta - 2.0 * bhat) -
                                 (nsc - 4.0) * bhat * bhat - 2.0 * beta * bhat;
          num = alphas.sc_sq(m) * (nsc - 1.0) * (nsc - 2.0) * bhat * bhat;
          den += alphas.sc_sq(m) * chi_hat;
          if (s.num_mue() > 0) den += s.p_bs * s.beta_bs[m](j);
          for (int n = 0; n < n_cells; ++n) {
            if (n == m || s.num_sue(n) == 0) continue;
            den += s.p_sc[n] * s.beta_ss[n][m](j);
          }
          for (int n : copilots) {
            if (s.num_sue(n) <= j) continue;
            den += alphas.sc_sq(n) * expected_copilot_ssi(s, g, n, m, j, opts.copilot_ssi);
          }
        } else {
          const double d =
              (nsc - 1.0) * (nsc - 2.0) * bhat * bhat / (nsc * sums.phi_ss(m));
          num = d * s.p_sc[m];
          const double e_own = beta - 2.0 * bhat / nsc -
                               ((nsc - 4.0) * bhat * bhat + 2.0 * beta * bhat) /
                                   (nsc * sums.phi_ss(m));
          den += e_own * s.p_sc[m];
          if (s.num_mue() > 0) den += s.beta_bs[m](j) * s.p_bs;
          for (int n = 0; n < n_cells; ++n) {
            if (n == m || s.num_sue(n) == 0) continue;
            double e = s.beta_ss[n][m](j);
            const bool copilot =
                std::find(copilots.begin(), copilots.end(), n) != copilots.end();
            if (copilot && s.num_sue(n) > j) {
              const double bc = s.beta_ss[n][m](j);
              const double bo = s.beta_ss[n][n](j);
              const double bho = g.ss_own[n](j);
              if (opts.copilot_ssi == CopilotSsiModel::kEstimateProduct) {
                e += nsc * bc * bc * bho * bho / (bo * bo * sums.phi_ss(n));
              } else {
                e += nsc * bc * g.ss_cross[n][m](j) / sums.phi_ss(n);
              }
            }
            den += e * s.p_sc[n];
          }
        }
        out.sue[m](j) = log2_1p(num / den);
      }
    }
    return out;
  }

  // ZFT. Complex-Wishart inverse moments: E[Tr{(G^H G)^-1}] = Psi / (n - m).
  for (int i = 0; i < s.num_mue(); ++i) {
    const double xi = s.beta_bm(i) - g.bm(i);
    double num = 0.0;
    double den = s.noise;
    if (moment) {
      num = alphas.bs_sq;
      den += alphas.bs_sq * xi * sums.psi_bm / (nbs - s.num_mue());
      // alpha_n^2 * beta * Psi_n / (N_SC - L) cancels exactly to p * beta
      for (int n = 0; n < n_cells; ++n) {
        if (s.num_sue(n) == 0) continue;
        den += s.p_sc[n] * s.beta_sm[n](i);
      }
    } else {
      const double a = (nbs - s.num_mue()) / sums.psi_bm;
      num = a * s.p_bs;
      den += xi * s.p_bs;
      for (int n = 0; n < n_cells; ++n) {
        if (s.num_sue(n) == 0) continue;
        den += s.beta_sm[n](i) * s.p_sc[n];
      }
    }
    out.mue(i) = log2_1p(num / den);
  }
  for (int m = 0; m < n_cells; ++m) {
    out.sue[m].set_size(s.num_sue(m));
    const auto copilots = s.copilots(m);
    const double lm = static_cast<double>(s.num_sue(m));
    for (int j = 0; j < s.num_sue(m); ++j) {
      const double xi = s.beta_ss[m][m](j) - g.ss_own[m](j);
      double num = 0.0;
      double den = s.noise;
      if (moment) {
        num = alphas.sc_sq(m);
        den += alphas.sc_sq(m) * xi * sums.psi_ss(m) / (nsc - lm);
        if (s.num_mue() > 0) den += s.p_bs * s.beta_bs[m](j);
        for (int n = 0; n < n_cells; ++n) {
          if (n == m || s.num_sue(n) == 0) continue;
          den += s.p_sc[n] * s.beta_ss[n][m](j);
        }
        // co-pilot cells: the correlated part of the cross channel rides the
        // unit-gain beam toward pilot j; the residual is weaker than the
        // plain gain already counted above.
        for (int n : copilots) {
          if (s.num_sue(n) <= j) continue;
          const double b_cross = g.ss_cross[n][m](j);
          den += alphas.sc_sq(n) * b_cross / g.ss_own[n](j) - s.p_sc[n] * b_cross;
        }
      } else {
        const double d = (nsc - lm) / sums.psi_ss(m);
        num = d * s.p_sc[m];
        den += xi * s.p_sc[m];
        if (s.num_mue() > 0) den += s.beta_bs[m](j) * s.p_bs;
        for (int n = 0; n < n_cells; ++n) {
          if (n == m || s.num_sue(n) == 0) continue;
          double e = s.beta_ss[n][m](j);
          const bool copilot = std::find(copilots.begin(), copilots.end(), n) != copilots.end();
          if (copilot && s.num_sue(n) > j) {
            const double bc = s.beta_ss[n][m](j);
            const double bo = s.beta_ss[n][n](j);
            e += (nsc - s.num_sue(n)) * bc * bc / (sums.psi_ss(n) * bo * bo) -
                 g.ss_cross[n][m](j);
          }
          den += e * s.p_sc[n];
        }
      }
      out.sue[m](j) = log2_1p(num / den);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Limit finite(double sinr) { return {LimitKind::kFinite, log2_1p(sinr)}; }

Limit classify(double exponent, double cap, double sinr_at_cap) {
  if (exponent > cap + kExponentTol) return {LimitKind::kVanishes, 0.0};
  if (exponent < cap - kExponentTol) return {LimitKind::kDiverges, arma::datum::inf};
  return finite(sinr_at_cap);
}

bool near(double a, double b) { return std::abs(a - b) < kExponentTol; }

}  // namespace

AsymptoticReport asymptotic_rates(const Scenario& s, const ScalingLaw& law, PrecoderKind kind) {
  s.validate();
  if (law.chi < 0.0 || law.eta < 0.0) throw ConfigError("asymptotic_rates: negative exponents");
  if (law.lambda <= 0.0) throw ConfigError("asymptotic_rates: lambda must be positive");
  const bool case_two = law.law_case == ScalingLaw::Case::kScaledPilot;
  if (case_two && (law.theta <= 0.0 || law.theta > 1.0))
    throw ConfigError("asymptotic_rates: case II requires 0 < theta <= 1");
  if (!case_two && law.theta != 0.0)
    throw ConfigError("asymptotic_rates: case I fixes the pilot power (theta = 0)");

  const EffectiveGains g = effective_gains(s);
  const StatSums sums = stat_sums(s, g);
  const int n_cells = s.num_sc();
  const bool mrt = kind == PrecoderKind::kMrt;
  const double cap = case_two ? 1.0 - law.theta : 1.0;

  AsymptoticReport rep;
  rep.mue.resize(s.num_mue());
  rep.sue.resize(n_cells);

  for (int i = 0; i < s.num_mue(); ++i) {
    double sinr = 0.0;
    if (!case_two) {
      const double num = mrt ? law.e_bs * g.bm(i) * g.bm(i) / sums.phi_bm
                             : law.e_bs / sums.psi_bm;
      double den = s.noise;
      if (near(law.chi, 0.0)) {
        double cross = 0.0;
        for (int n = 0; n < n_cells; ++n) cross += s.beta_sm[n](i);
        den += law.e_sc * cross;
      }
      sinr = num / den;
    } else {
      double residual = 0.0;
      if (near(cap, 0.0)) {  // theta = 1: fixed node powers leave interference behind
        double cross = 0.0;
        for (int n = 0; n < n_cells; ++n) cross += s.beta_sm[n](i);
        residual = law.e_bs * s.beta_bm(i) + law.e_sc * cross;
      }
      const double boost = std::pow(law.lambda, law.theta) * s.tau * law.e_tau * law.e_bs;
      double shape = 0.0;
      for (int k = 0; k < s.num_mue(); ++k) {
        const double b = s.beta_bm(k);
        shape += mrt ? b * b : 1.0 / (b * b);
      }
      const double b4 = mrt ? std::pow(s.beta_bm(i), 4.0) : 1.0;
      sinr = boost * b4 / (shape * s.noise * (residual + s.noise));
    }
    rep.mue[i] = classify(law.eta, cap, sinr);
  }

  for (int m = 0; m < n_cells; ++m) {
    rep.sue[m].resize(s.num_sue(m));
    const auto copilots = s.copilots(m);
    for (int j = 0; j < s.num_sue(m); ++j) {
      if (case_two && !copilots.empty()) {
        // Pilot sharing plus decaying pilot power: the contaminating beams
        // grow with the array and the rate collapses.
        rep.sue[m][j] = {LimitKind::kVanishes, 0.0};
        continue;
      }
      double sinr = 0.0;
      if (!case_two) {
        const double num = mrt ? law.e_sc * g.ss_own[m](j) * g.ss_own[m](j) / sums.phi_ss(m)
                               : law.e_sc / sums.psi_ss(m);
        double den = s.noise;
        for (int n : copilots) {
          if (s.num_sue(n) <= j) continue;
          const double bc = s.beta_ss[n][m](j);
          const double bo = s.beta_ss[n][n](j);
          den += mrt ? law.e_sc * g.ss_own[n](j) * g.ss_cross[n][m](j) / sums.phi_ss(n)
                     : law.e_sc * bc * bc / (sums.psi_ss(n) * bo * bo);
        }
        if (near(law.eta, 0.0)) den += law.e_bs * s.beta_bs[m](j);
        sinr = num / den;
      } else {
        double residual = 0.0;
        if (near(cap, 0.0)) {
          double cross = 0.0;
          for (int n = 0; n < n_cells; ++n) cross += s.beta_ss[n][m](j);
          residual = law.e_sc * cross + law.e_bs * s.beta_bs[m](j);
        }
        double shape = 0.0;
        for (int l = 0; l < s.num_sue(m); ++l) {
          const double b = s.beta_ss[m][m](l);
          shape += mrt ? b * b : 1.0 / (b * b);
        }
        const double b4 = mrt ? std::pow(s.beta_ss[m][m](j), 4.0) : 1.0;
        sinr = s.tau * law.e_tau * law.e_sc * b4 / (shape * s.noise * (residual + s.noise));
      }
      rep.sue[m][j] = classify(law.chi, cap, sinr);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

void run_parallel(int workers, int count, const std::function<void(int)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

arma::vec trial_user_rates(const Scenario& s, const ChannelDraw& draw, const ChannelEstimate& est,
                           const Precoder& p) {
  const int n_cells = s.num_sc();
  arma::vec out(s.num_users());
  int slot = 0;
  for (int i = 0; i < s.num_mue(); ++i) {
    const arma::cx_vec g_hat = est.g_hat_bm.col(i);
    const arma::cx_vec g = draw.g_bm.col(i);
    const arma::cx_vec xi = g - g_hat;
    const double desired = std::norm(arma::as_scalar(arma::strans(g_hat) * p.w_bs.col(i)));
    const double eei = std::norm(arma::as_scalar(arma::strans(xi) * p.w_bs.col(i)));
    double imi = 0.0;
    const arma::cx_rowvec row = arma::strans(g) * p.w_bs;
    for (int k = 0; k < s.num_mue(); ++k) {
      if (k != i) imi += std::norm(row(k));
    }
    double cti = 0.0;
    for (int n = 0; n < n_cells; ++n) {
      if (s.num_sue(n) == 0) continue;
      const arma::cx_rowvec r = arma::strans(draw.g_sm[n].col(i)) * p.w_sc[n];
      cti += arma::accu(arma::square(arma::abs(r)));
    }
    out(slot++) = log2_1p(desired / (eei + imi + cti + s.noise));
  }
  for (int m = 0; m < n_cells; ++m) {
    for (int j = 0; j < s.num_sue(m); ++j) {
      const arma::cx_vec g_hat = est.g_hat_ss[m].col(j);
      const arma::cx_vec g = draw.g_ss[m][m].col(j);
      const arma::cx_vec xi = g - g_hat;
      const double desired = std::norm(arma::as_scalar(arma::strans(g_hat) * p.w_sc[m].col(j)));
      const double eei = std::norm(arma::as_scalar(arma::strans(xi) * p.w_sc[m].col(j)));
      double isi = 0.0;
      const arma::cx_rowvec own = arma::strans(g) * p.w_sc[m];
      for (int l = 0; l < s.num_sue(m); ++l) {
        if (l != j) isi += std::norm(own(l));
      }
      double cti = 0.0;
      if (s.num_mue() > 0) {
        const arma::cx_rowvec r = arma::strans(draw.g_bs[m].col(j)) * p.w_bs;
        cti = arma::accu(arma::square(arma::abs(r)));
      }
      double ssi = 0.0;
      for (int n = 0; n < n_cells; ++n) {
        if (n == m || s.num_sue(n) == 0) continue;
        const arma::cx_rowvec r = arma::strans(draw.g_ss[n][m].col(j)) * p.w_sc[n];
        ssi += arma::accu(arma::square(arma::abs(r)));
      }
      out(slot++) = log2_1p(desired / (eei + cti + isi + ssi + s.noise));
    }
  }
  return out;
}

McReport mc_rates(const Scenario& s, PrecoderKind kind, const McOptions& opts) {
  s.validate();
  check_preconditions(s, kind);
  if (opts.trials < 1) throw ConfigError("mc_rates: need at least one trial");
  const EffectiveGains gains = effective_gains(s);
  const Alphas alphas = precoder_alphas(s, gains, kind);
  const int n_users = s.num_users();

  arma::mat samples(n_users, opts.trials);
  auto one_trial = [&](int t, bool retry) {
    const std::uint64_t sub =
        static_cast<std::uint64_t>(t) | (retry ? std::uint64_t{kStreamRetryOffset} : 0ULL);
    Rng rng(opts.master_seed, opts.stream, sub);
    const auto [draw, est] = draw_trial(s, gains, opts.estimation, rng);
    const Precoder p = make_precoder(kind, est, s, alphas);
    samples.col(t) = trial_user_rates(s, draw, est, p);
  };
  run_parallel(opts.workers, opts.trials, [&](int t) {
    try {
      one_trial(t, false);
    } catch (const NumericalError&) {
      one_trial(t, true);  // one retry on a fresh substream, then give up
    }
  });

  const double n = static_cast<double>(opts.trials);
  McReport rep;
  rep.mue.resize(s.num_mue());
  rep.sue.resize(s.num_sc());
  auto reduce = [&](RateStat& stat, const arma::rowvec& row) {
    stat.mean = arma::accu(row) / n;
    if (opts.trials > 1) {
      const double ss = arma::accu(arma::square(row - stat.mean));
      stat.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
  };
  int slot = 0;
  for (int i = 0; i < s.num_mue(); ++i) reduce(rep.mue[i], samples.row(slot++));
  for (int m = 0; m < s.num_sc(); ++m) {
    rep.sue[m].resize(s.num_sue(m));
    for (int j = 0; j < s.num_sue(m); ++j) reduce(rep.sue[m][j], samples.row(slot++));
  }
  reduce(rep.network, arma::sum(samples, 0));
  return rep;
}

double spectral_efficiency(double sum_rate, int coherence, int tau) {
  if (tau < 0 || tau >= coherence)
    throw ConfigError("spectral_efficiency: require 0 <= tau < T");
  return (static_cast<double>(coherence - tau) / static_cast<double>(coherence)) * sum_rate;
}

// ---------------------------------------------------------------------------

namespace {

// Smallest power (dBm) at which eval(p) >= target, by bisection; eval must be
// nondecreasing in p. Returns false when even hi_dbm cannot reach the target.
bool bisect_power(const std::function<double(double)>& eval, double target, double lo_dbm,
                  double hi_dbm, double tol_db, double* out_dbm) {
  if (eval(dbm_to_mw(hi_dbm)) < target) return false;
  if (eval(dbm_to_mw(lo_dbm)) >= target) {
    *out_dbm = lo_dbm;
    return true;
  }
  double lo = lo_dbm, hi = hi_dbm;
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (lo + hi);
    if (eval(dbm_to_mw(mid)) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  *out_dbm = hi;
  return true;
}

double min_mue_rate(const Scenario& s, PrecoderKind kind) {
  const UserRates r = bound_rates(s, kind);
  return r.mue.n_elem > 0 ? r.mue.min() : arma::datum::inf;
}

double min_sue_rate(const Scenario& s, PrecoderKind kind) {
  const UserRates r = bound_rates(s, kind);
  double lo = arma::datum::inf;
  for (const auto& v : r.sue) {
    if (v.n_elem > 0) lo = std::min(lo, v.min());
  }
  return lo;
}

}  // namespace

RequiredPower required_power(Scenario s, double target_rate, PrecoderKind kind,
                             const RequiredPowerOptions& opts) {
  if (target_rate <= 0.0) throw ConfigError("required_power: target must be positive");
  const double target = opts.overhead_adjusted
                            ? target_rate * static_cast<double>(s.coherence) /
                                  static_cast<double>(s.coherence - s.tau)
                            : target_rate;
  RequiredPower out;

  auto mue_rate_at = [&](double p_bs, double p_sc) {
    s.p_bs = p_bs;
    std::fill(s.p_sc.begin(), s.p_sc.end(), p_sc);
    return min_mue_rate(s, kind);
  };
  auto sue_rate_at = [&](double p_bs, double p_sc) {
    s.p_bs = p_bs;
    std::fill(s.p_sc.begin(), s.p_sc.end(), p_sc);
    return min_sue_rate(s, kind);
  };

  if (!opts.coupled) {
    double dbm = 0.0;
    out.feasible_bs = bisect_power([&](double p) { return mue_rate_at(p, 0.0); }, target,
                                   opts.lo_dbm, opts.hi_dbm, opts.tol_db, &dbm);
    out.p_bs = out.feasible_bs ? dbm_to_mw(dbm) : arma::datum::nan;
    out.feasible_sc = bisect_power([&](double p) { return sue_rate_at(0.0, p); }, target,
                                   opts.lo_dbm, opts.hi_dbm, opts.tol_db, &dbm);
    out.p_sc = out.feasible_sc ? dbm_to_mw(dbm) : arma::datum::nan;
    out.residual_db = opts.tol_db;
    out.sweeps = 1;
    return out;
  }

  double p_bs_dbm = 0.0;
  double p_sc_dbm = opts.lo_dbm;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    out.sweeps = sweep + 1;
    double new_bs = 0.0;
    out.feasible_bs =
        bisect_power([&](double p) { return mue_rate_at(p, dbm_to_mw(p_sc_dbm)); }, target,
                     opts.lo_dbm, opts.hi_dbm, opts.tol_db, &new_bs);
    if (!out.feasible_bs) break;
    double new_sc = 0.0;
    out.feasible_sc =
        bisect_power([&](double p) { return sue_rate_at(dbm_to_mw(new_bs), p); }, target,
                     opts.lo_dbm, opts.hi_dbm, opts.tol_db, &new_sc);
    if (!out.feasible_sc) break;
    const double residual =
        std::max(std::abs(new_bs - p_bs_dbm), std::abs(new_sc - p_sc_dbm));
    p_bs_dbm = new_bs;
    p_sc_dbm = new_sc;
    out.residual_db = residual;
    if (sweep > 0 && residual < opts.tol_db) break;
  }
  out.p_bs = out.feasible_bs ? dbm_to_mw(p_bs_dbm) : arma::datum::nan;
  out.p_sc = out.feasible_sc ? dbm_to_mw(p_sc_dbm) : arma::datum::nan;
  return out;
}

}  // namespace hetsim
