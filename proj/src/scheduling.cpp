// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/scheduling.hpp"

#include <algorithm>
#include <numeric>

namespace hetsim {

namespace {

arma::vec take(const arma::vec& v, const std::vector<int>& idx) {
  arma::vec out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

void check_feasible(const CandidatePool& pool, int n_mue, int n_sue) {
  if (pool.num_macro_candidates() < n_mue)
    throw InfeasibleError("scheduling: not enough MUE candidates");
  for (int m = 0; m < pool.num_sc(); ++m) {
    if (pool.num_cell_candidates(m) < n_sue)
      throw InfeasibleError("scheduling: not enough SUE candidates in a cell");
  }
}

double finite_sum(const std::vector<Limit>& limits) {
  double sum = 0.0;
  for (const auto& lim : limits) {
    if (lim.kind != LimitKind::kFinite)
      throw ConfigError("asa: scaling law must give finite per-user limits");
    sum += lim.rate;
  }
  return sum;
}

}  // namespace

Scenario select_scenario(const CandidatePool& pool, const SystemContext& ctx,
                         const std::vector<int>& mue_sel,
                         const std::vector<std::vector<int>>& sue_sel) {
  const int n_cells = pool.num_sc();
  Scenario s;
  s.n_bs = ctx.n_bs;
  s.n_sc = ctx.n_sc;
  s.reuse = ctx.reuse;
  s.tau = ctx.tau;
  s.coherence = ctx.coherence;
  s.perfect_csi = ctx.perfect_csi;
  s.p_bs = ctx.p_bs;
  s.p_sc = ctx.p_sc;
  s.p_pilot = ctx.p_pilot;
  s.noise = ctx.noise;
  s.beta_bm = take(pool.beta_bm, mue_sel);
  s.beta_sm.resize(n_cells);
  s.beta_bs.resize(n_cells);
  s.beta_ss.assign(n_cells, std::vector<arma::vec>(n_cells));
  for (int n = 0; n < n_cells; ++n) s.beta_sm[n] = take(pool.beta_sm[n], mue_sel);
  for (int m = 0; m < n_cells; ++m) {
    s.beta_bs[m] = take(pool.beta_bs[m], sue_sel[m]);
    for (int n = 0; n < n_cells; ++n) s.beta_ss[n][m] = take(pool.beta_ss[n][m], sue_sel[m]);
  }
  if (n_cells > 0) s.groups = pilot_groups(n_cells, ctx.reuse);
  s.validate();
  return s;
}

double sum_rate_objective(const CandidatePool& pool, const SystemContext& ctx, PrecoderKind kind,
                          const std::vector<int>& mue_sel,
                          const std::vector<std::vector<int>>& sue_sel) {
  const Scenario s = select_scenario(pool, ctx, mue_sel, sue_sel);
  const UserRates rates = bound_rates(s, kind);
  return spectral_efficiency(total_rate(rates), ctx.coherence, ctx.tau);
}

Schedule rsa(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
             PrecoderKind kind, Rng& rng) {
  check_feasible(pool, n_mue, n_sue);
  auto sample = [&rng](int population, int wanted) {
    std::vector<int> idx(population);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < wanted; ++i) {
      const int j = i + static_cast<int>(rng.uniform() * static_cast<double>(population - i));
      std::swap(idx[i], idx[std::min(j, population - 1)]);
    }
    idx.resize(wanted);
    std::sort(idx.begin(), idx.end());
    return idx;
  };
  Schedule sched;
  sched.mue = sample(pool.num_macro_candidates(), n_mue);
  sched.sue.resize(pool.num_sc());
  for (int m = 0; m < pool.num_sc(); ++m) sched.sue[m] = sample(pool.num_cell_candidates(m), n_sue);
  sched.objective = sum_rate_objective(pool, ctx, kind, sched.mue, sched.sue);
  return sched;
}

Schedule gsa(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
             PrecoderKind kind) {
  const int n_cells = pool.num_sc();
  check_feasible(pool, n_mue, n_sue);
  Schedule sched;
  sched.sue.assign(n_cells, {});
  std::vector<int> free_mue(pool.num_macro_candidates());
  std::iota(free_mue.begin(), free_mue.end(), 0);
  std::vector<std::vector<int>> free_sue(n_cells);
  for (int m = 0; m < n_cells; ++m) {
    free_sue[m].resize(pool.num_cell_candidates(m));
    std::iota(free_sue[m].begin(), free_sue[m].end(), 0);
  }

  auto add_best_mue = [&] {
    double best = -arma::datum::inf;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < free_mue.size(); ++pos) {
      sched.mue.push_back(free_mue[pos]);
      const double value = sum_rate_objective(pool, ctx, kind, sched.mue, sched.sue);
      sched.mue.pop_back();
      if (value > best) {
        best = value;
        best_pos = pos;
      }
    }
    sched.mue.push_back(free_mue[best_pos]);
    free_mue.erase(free_mue.begin() + best_pos);
  };
  auto add_best_sue = [&](int m) {
    double best = -arma::datum::inf;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < free_sue[m].size(); ++pos) {
      sched.sue[m].push_back(free_sue[m][pos]);
      const double value = sum_rate_objective(pool, ctx, kind, sched.mue, sched.sue);
      sched.sue[m].pop_back();
      if (value > best) {
        best = value;
        best_pos = pos;
      }
    }
    sched.sue[m].push_back(free_sue[m][best_pos]);
    free_sue[m].erase(free_sue[m].begin() + best_pos);
  };

  if (n_cells == 0 || n_sue == 0) {
    for (int k = 0; k < n_mue; ++k) add_best_mue();
  } else {
    const int per_round = n_mue / n_sue;
    for (;;) {
      for (int k = 0; k < per_round; ++k) add_best_mue();
      for (int m = 0; m < n_cells; ++m) add_best_sue(m);
      bool full = true;
      for (int m = 0; m < n_cells; ++m) full = full && static_cast<int>(sched.sue[m].size()) == n_sue;
      if (full) break;
    }
    for (int k = 0; k < n_mue % n_sue; ++k) add_best_mue();
  }
  sched.objective = sum_rate_objective(pool, ctx, kind, sched.mue, sched.sue);
  return sched;
}

Schedule asa_mrt(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
                 const ScalingLaw& law) {
  const int n_cells = pool.num_sc();
  check_feasible(pool, n_mue, n_sue);
  Schedule sched;
  sched.sue.assign(n_cells, {});
  const double overhead =
      static_cast<double>(ctx.coherence - ctx.tau) / static_cast<double>(ctx.coherence);

  // Macro side: greedy on the asymptotic MUE rates of the tentative set.
  {
    std::vector<int> free(pool.num_macro_candidates());
    std::iota(free.begin(), free.end(), 0);
    const std::vector<std::vector<int>> no_sue(n_cells);
    while (static_cast<int>(sched.mue.size()) < n_mue) {
      double best = -arma::datum::inf;
      std::size_t best_pos = 0;
      for (std::size_t pos = 0; pos < free.size(); ++pos) {
        sched.mue.push_back(free[pos]);
        const Scenario sub = select_scenario(pool, ctx, sched.mue, no_sue);
        const double value = overhead * finite_sum(asymptotic_rates(sub, law, PrecoderKind::kMrt).mue);
        sched.mue.pop_back();
        if (value > best) {
          best = value;
          best_pos = pos;
        }
      }
      sched.mue.push_back(free[best_pos]);
      free.erase(free.begin() + best_pos);
    }
  }

  // Each cell schedules on its own statistics only.
  for (int m = 0; m < n_cells; ++m) {
    SystemContext local_ctx = ctx;
    local_ctx.reuse = 1;
    local_ctx.p_sc = {ctx.p_sc[m]};
    CandidatePool local;
    local.beta_bm = arma::vec();
    local.beta_sm = {arma::vec()};
    local.beta_bs = {pool.beta_bs[m]};
    local.beta_ss = {{pool.beta_ss[m][m]}};
    std::vector<int> free(pool.num_cell_candidates(m));
    std::iota(free.begin(), free.end(), 0);
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < n_sue) {
      double best = -arma::datum::inf;
      std::size_t best_pos = 0;
      for (std::size_t pos = 0; pos < free.size(); ++pos) {
        chosen.push_back(free[pos]);
        const Scenario sub = select_scenario(local, local_ctx, {}, {chosen});
        const double value =
            overhead * finite_sum(asymptotic_rates(sub, law, PrecoderKind::kMrt).sue[0]);
        chosen.pop_back();
        if (value > best) {
          best = value;
          best_pos = pos;
        }
      }
      chosen.push_back(free[best_pos]);
      free.erase(free.begin() + best_pos);
    }
    sched.sue[m] = chosen;
  }
  sched.objective = sum_rate_objective(pool, ctx, PrecoderKind::kMrt, sched.mue, sched.sue);
  return sched;
}

Schedule asa_zft(const CandidatePool& pool, const SystemContext& ctx, int n_mue, int n_sue,
                 const ScalingLaw& law) {
  (void)law;  // selection is the same for either admissible exponent
  check_feasible(pool, n_mue, n_sue);
  auto top = [](const arma::vec& beta, int wanted) {
    std::vector<int> idx(beta.n_elem);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (beta(a) != beta(b)) return beta(a) > beta(b);
      return a < b;
    });
    idx.resize(wanted);
    std::sort(idx.begin(), idx.end());
    return idx;
  };
  Schedule sched;
  sched.mue = top(pool.beta_bm, n_mue);
  sched.sue.resize(pool.num_sc());
  for (int m = 0; m < pool.num_sc(); ++m) sched.sue[m] = top(pool.beta_ss[m][m], n_sue);
  sched.objective = sum_rate_objective(pool, ctx, PrecoderKind::kZft, sched.mue, sched.sue);
  return sched;
}

}  // namespace hetsim
