// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace hetsim {

namespace {

using Kind = ExperimentConfig::Kind;
using Algorithm = ExperimentConfig::Algorithm;

std::uint64_t stream_tag(std::uint64_t purpose, std::uint64_t point_key, std::uint64_t drop,
                         std::uint64_t extra = 0) {
  return mix64(purpose ^ (point_key + 1) * 0x9e3779b97f4a7c15ULL ^
               (drop + 1) * 0xc2b2ae3d27d4eb4fULL ^ (extra + 1) * 0x165667b19e3779f9ULL);
}

std::vector<double> default_sweep(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::kRateSweep:
    case Kind::kScheduling:
    case Kind::kOneTier:
      return {30, 34, 38, 42, 46, 50};
    case Kind::kPrSweep: {
      std::vector<double> gammas;
      for (int g = 1; g <= cfg.s; ++g) {
        if (cfg.s % g == 0) gammas.push_back(g);
      }
      return gammas;
    }
    case Kind::kPowerScaling:
      return {16, 32, 64, 128};
  }
  return {};
}

SystemContext make_context(const ExperimentConfig& cfg, int gamma, double p_bs, double p_sc) {
  SystemContext ctx;
  ctx.n_bs = cfg.n_bs;
  ctx.n_sc = cfg.derived_n_sc();
  ctx.reuse = gamma;
  ctx.tau = cfg.k + cfg.l * gamma;
  ctx.coherence = cfg.coherence;
  ctx.p_bs = p_bs;
  ctx.p_pilot = cfg.use_gain_table ? cfg.table_p_pilot : cfg.p_pilot_mw();
  ctx.noise = cfg.use_gain_table ? cfg.table_noise : cfg.noise_mw();
  ctx.p_sc.assign(cfg.s, p_sc);
  return ctx;
}

CandidatePool table_pool(const ExperimentConfig& cfg) {
  CandidatePool pool;
  pool.beta_bm = arma::vec(cfg.k, arma::fill::value(cfg.gain_table.bm));
  pool.beta_sm.assign(cfg.s, arma::vec(cfg.k, arma::fill::value(cfg.gain_table.sm)));
  pool.beta_bs.assign(cfg.s, arma::vec(cfg.l, arma::fill::value(cfg.gain_table.bs)));
  pool.beta_ss.assign(cfg.s, std::vector<arma::vec>(cfg.s));
  for (int n = 0; n < cfg.s; ++n) {
    for (int m = 0; m < cfg.s; ++m) {
      pool.beta_ss[n][m] = arma::vec(
          cfg.l, arma::fill::value(n == m ? cfg.gain_table.ss_own : cfg.gain_table.ss_cross));
    }
  }
  return pool;
}

Schedule make_schedule(const ExperimentConfig& cfg, const CandidatePool& pool,
                       const SystemContext& ctx, PrecoderKind kind, std::uint64_t point_key,
                       int drop) {
  switch (cfg.algorithm) {
    case Algorithm::kRsa: {
      Rng rng(cfg.seed, kStreamScheduling, stream_tag(kStreamScheduling, point_key, drop));
      return rsa(pool, ctx, cfg.k, cfg.l, kind, rng);
    }
    case Algorithm::kGsa:
      return gsa(pool, ctx, cfg.k, cfg.l, kind);
    case Algorithm::kAsa: {
      ScalingLaw law;  // case I, chi = eta = 1, energy levels at current power
      law.e_bs = ctx.p_bs * ctx.n_bs;
      law.e_sc = (ctx.p_sc.empty() ? 0.0 : ctx.p_sc[0]) * ctx.n_sc;
      law.lambda = static_cast<double>(ctx.n_bs) / std::max(1, ctx.n_sc);
      return kind == PrecoderKind::kMrt ? asa_mrt(pool, ctx, cfg.k, cfg.l, law)
                                        : asa_zft(pool, ctx, cfg.k, cfg.l, law);
    }
  }
  throw ConfigError("make_schedule: unknown algorithm");
}

struct Metrics {
  double sum_bound = arma::datum::nan;
  double se_bound = arma::datum::nan;
  double min_bound = arma::datum::nan;
  double mean_bound = arma::datum::nan;
  double boundary_bound = arma::datum::nan;
  double sum_mc = arma::datum::nan;
  double se_mc = arma::datum::nan;
  double se_mc_stderr = arma::datum::nan;
  double boundary_mc = arma::datum::nan;
  double objective = arma::datum::nan;
};

double sue_mean(const UserRates& rates) {
  double sum = 0.0;
  int count = 0;
  for (const auto& cell : rates.sue) {
    sum += arma::accu(cell);
    count += static_cast<int>(cell.n_elem);
  }
  return count > 0 ? sum / count : arma::datum::nan;
}

Metrics eval_metrics(const ExperimentConfig& cfg, const Scenario& scenario, PrecoderKind kind,
                     std::uint64_t mc_stream, int boundary_from = -1) {
  Metrics m;
  const UserRates bounds = bound_rates(scenario, kind);
  m.sum_bound = total_rate(bounds);
  m.se_bound = spectral_efficiency(m.sum_bound, scenario.coherence, scenario.tau);
  m.min_bound = min_rate(bounds);
  m.mean_bound = m.sum_bound / scenario.num_users();
  if (boundary_from >= 0) {
    // one-tier view: boundary users are the tail entries of the MUE vector
    const int n = scenario.num_mue();
    m.boundary_bound = boundary_from < n
                           ? arma::accu(bounds.mue.subvec(boundary_from, n - 1)) /
                                 static_cast<double>(n - boundary_from)
                           : arma::datum::nan;
  } else {
    m.boundary_bound = sue_mean(bounds);
  }
  if (cfg.run_mc) {
    McOptions opts;
    opts.trials = cfg.trials;
    opts.master_seed = cfg.seed;
    opts.stream = mc_stream;
    opts.workers = cfg.workers;
    opts.estimation = cfg.estimation;
    const McReport mc = mc_rates(scenario, kind, opts);
    m.sum_mc = total_rate(mc);
    m.se_mc = spectral_efficiency(m.sum_mc, scenario.coherence, scenario.tau);
    m.se_mc_stderr =
        spectral_efficiency(mc.network.std_error, scenario.coherence, scenario.tau);
    if (boundary_from >= 0) {
      double sum = 0.0;
      int count = 0;
      for (int i = boundary_from; i < scenario.num_mue(); ++i) {
        sum += mc.mue[i].mean;
        ++count;
      }
      m.boundary_mc = count > 0 ? sum / count : arma::datum::nan;
    } else {
      double sum = 0.0;
      int count = 0;
      for (const auto& cell : mc.sue) {
        for (const auto& u : cell) {
          sum += u.mean;
          ++count;
        }
      }
      m.boundary_mc = count > 0 ? sum / count : arma::datum::nan;
    }
  }
  return m;
}

void accumulate(Metrics& acc, const Metrics& x, int count) {
  auto add = [count](double& a, double v) {
    if (count == 0) a = 0.0;
    if (!std::isnan(v)) a += v;
  };
  add(acc.sum_bound, x.sum_bound);
  add(acc.se_bound, x.se_bound);
  add(acc.min_bound, x.min_bound);
  add(acc.mean_bound, x.mean_bound);
  add(acc.boundary_bound, x.boundary_bound);
  add(acc.sum_mc, x.sum_mc);
  add(acc.se_mc, x.se_mc);
  add(acc.boundary_mc, x.boundary_mc);
  add(acc.objective, x.objective);
  if (count == 0) acc.se_mc_stderr = 0.0;
  if (!std::isnan(x.se_mc_stderr)) acc.se_mc_stderr += x.se_mc_stderr * x.se_mc_stderr;
}

void finish_average(Metrics& acc, int count) {
  if (count == 0) return;
  const double d = count;
  acc.sum_bound /= d;
  acc.se_bound /= d;
  acc.min_bound /= d;
  acc.mean_bound /= d;
  acc.boundary_bound /= d;
  acc.sum_mc /= d;
  acc.se_mc /= d;
  acc.boundary_mc /= d;
  acc.objective /= d;
  acc.se_mc_stderr = std::sqrt(acc.se_mc_stderr) / d;
}

std::vector<PrecoderKind> enabled_kinds(const ExperimentConfig& cfg) {
  std::vector<PrecoderKind> kinds;
  if (cfg.run_mrt) kinds.push_back(PrecoderKind::kMrt);
  if (cfg.run_zft) kinds.push_back(PrecoderKind::kZft);
  return kinds;
}

const char* kind_name(PrecoderKind k) { return k == PrecoderKind::kMrt ? "mrt" : "zft"; }

void push_metric_columns(std::vector<std::string>& cols, const std::string& prefix,
                         const char* kind, bool with_mc) {
  cols.push_back(prefix + "sum_bound_" + kind);
  cols.push_back(prefix + "se_bound_" + kind);
  cols.push_back(prefix + "min_bound_" + kind);
  cols.push_back(prefix + "mean_bound_" + kind);
  cols.push_back(prefix + "boundary_bound_" + kind);
  if (with_mc) {
    cols.push_back(prefix + "sum_mc_" + kind);
    cols.push_back(prefix + "se_mc_" + kind);
    cols.push_back(prefix + "se_mc_stderr_" + kind);
    cols.push_back(prefix + "boundary_mc_" + kind);
  }
  cols.push_back(prefix + "objective_" + kind);
}

void push_metric_values(std::vector<double>& row, const Metrics& m, bool with_mc) {
  row.push_back(m.sum_bound);
  row.push_back(m.se_bound);
  row.push_back(m.min_bound);
  row.push_back(m.mean_bound);
  row.push_back(m.boundary_bound);
  if (with_mc) {
    row.push_back(m.sum_mc);
    row.push_back(m.se_mc);
    row.push_back(m.se_mc_stderr);
    row.push_back(m.boundary_mc);
  }
  row.push_back(m.objective);
}

}  // namespace

DropData make_drop(const ExperimentConfig& cfg, std::uint64_t point_key, int drop_index,
                   double p_bs_mw, double p_sc_mw, int max_attempts) {
  if (cfg.use_gain_table) return {table_pool(cfg), 0};
  NetworkLayout layout;
  if (cfg.sc_placement == ExperimentConfig::ScPlacement::kRing) {
    layout = place_nodes(cfg.s, cfg.ring_radius_m, cfg.cell_radius_m);
  } else {
    Rng rng(cfg.seed, kStreamNodePlacement, stream_tag(kStreamNodePlacement, point_key, drop_index));
    layout = place_nodes_uniform(cfg.s, cfg.cell_radius_m, rng);
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(cfg.seed, kStreamUserDrop,
            stream_tag(kStreamUserDrop, point_key, drop_index, attempt));
    const UserPopulation users = place_users(cfg.derived_users(), cfg.cell_radius_m, rng);
    LargeScaleProfile profile = large_scale_profile(layout, users);
    associate(profile, cfg.kappa_bs, cfg.kappa_sc, p_bs_mw, p_sc_mw);
    bool feasible = static_cast<int>(profile.macro_users.size()) >= cfg.k;
    for (int m = 0; m < cfg.s && feasible; ++m) {
      feasible = static_cast<int>(profile.sc_users[m].size()) >= cfg.l;
    }
    if (!feasible) continue;
    DropData drop;
    drop.retries = attempt;
    CandidatePool& pool = drop.pool;
    const auto& macro = profile.macro_users;
    pool.beta_bm.set_size(macro.size());
    for (std::size_t i = 0; i < macro.size(); ++i) pool.beta_bm(i) = profile.beta_bm(macro[i]);
    pool.beta_sm.assign(cfg.s, arma::vec(macro.size()));
    for (int n = 0; n < cfg.s; ++n) {
      for (std::size_t i = 0; i < macro.size(); ++i)
        pool.beta_sm[n](i) = profile.beta_sm(n, macro[i]);
    }
    pool.beta_bs.resize(cfg.s);
    pool.beta_ss.assign(cfg.s, std::vector<arma::vec>(cfg.s));
    for (int m = 0; m < cfg.s; ++m) {
      const auto& cell = profile.sc_users[m];
      pool.beta_bs[m].set_size(cell.size());
      for (std::size_t v = 0; v < cell.size(); ++v)
        pool.beta_bs[m](v) = profile.beta_bm(cell[v]);
      for (int n = 0; n < cfg.s; ++n) {
        pool.beta_ss[n][m].set_size(cell.size());
        for (std::size_t v = 0; v < cell.size(); ++v)
          pool.beta_ss[n][m](v) = profile.beta_sm(n, cell[v]);
      }
    }
    return drop;
  }
  throw InfeasibleError("make_drop: could not draw enough candidates per cell");
}

Scenario one_tier_scenario(const ExperimentConfig& cfg, const CandidatePool& pool,
                           const SystemContext& ctx, const Schedule& sched) {
  Scenario s;
  s.n_bs = ctx.n_bs + cfg.s * ctx.n_sc;
  s.n_sc = 0;
  s.reuse = 1;
  s.coherence = ctx.coherence;
  s.p_bs = ctx.p_bs;
  s.p_pilot = ctx.p_pilot;
  s.noise = ctx.noise;
  int total = static_cast<int>(sched.mue.size());
  for (const auto& cell : sched.sue) total += static_cast<int>(cell.size());
  s.tau = total;  // orthogonal pilots for every served user
  s.beta_bm.set_size(total);
  int slot = 0;
  for (int i : sched.mue) s.beta_bm(slot++) = pool.beta_bm(i);
  for (int m = 0; m < static_cast<int>(sched.sue.size()); ++m) {
    for (int j : sched.sue[m]) s.beta_bm(slot++) = pool.beta_bs[m](j);
  }
  s.validate();
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> sweep = cfg.sweep_values.empty() ? default_sweep(cfg) : cfg.sweep_values;
  const std::vector<PrecoderKind> kinds = enabled_kinds(cfg);

  ExperimentResult result;
  RunInfo& info = result.info;
  info.cfg_hash = config_hash(cfg);
  info.seed = cfg.seed;
  info.version = kVersion;
  info.workers = cfg.workers;
  info.trials = cfg.trials;
  info.drops = cfg.drops;

  ResultTable& table = result.table;
  const bool with_mc = cfg.run_mc;

  // -------------------------------------------------------------- columns
  switch (cfg.kind) {
    case Kind::kRateSweep:
    case Kind::kOneTier:
      table.columns.push_back("p_bs_dbm");
      for (PrecoderKind k : kinds) push_metric_columns(table.columns, "", kind_name(k), with_mc);
      if (cfg.kind == Kind::kOneTier) {
        for (PrecoderKind k : kinds)
          push_metric_columns(table.columns, "one_", kind_name(k), with_mc);
      }
      break;
    case Kind::kPrSweep:
      table.columns.push_back("gamma");
      table.columns.push_back("tau");
      for (PrecoderKind k : kinds) push_metric_columns(table.columns, "", kind_name(k), with_mc);
      break;
    case Kind::kScheduling:
      table.columns.push_back("p_bs_dbm");
      for (PrecoderKind k : kinds) {
        for (const char* alg : {"rsa", "gsa", "asa"}) {
          table.columns.push_back(std::string("se_") + alg + "_" + kind_name(k));
        }
      }
      break;
    case Kind::kPowerScaling:
      table.columns.push_back("n_sc");
      for (PrecoderKind k : kinds) {
        for (int g : (cfg.gamma_list.empty() ? std::vector<int>{1, 2, 4, 8} : cfg.gamma_list)) {
          const std::string tag = std::string(kind_name(k)) + "_g" + std::to_string(g);
          table.columns.push_back("req_pbs_dbm_" + tag);
          table.columns.push_back("req_psc_dbm_" + tag);
          table.columns.push_back("feasible_" + tag);
        }
      }
      break;
  }
  table.columns.push_back("feasible");
  table.columns.push_back("seed");
  table.columns.push_back("trials");

  // ----------------------------------------------------------------- rows
  for (std::size_t point = 0; point < sweep.size(); ++point) {
    const std::uint64_t point_key = cfg.pin_drops ? 0 : point + 1;
    std::vector<double> row;
    int point_retries = 0;
    bool point_feasible = true;

    if (cfg.kind == Kind::kPowerScaling) {
      if (!cfg.use_gain_table)
        throw ConfigError("run_experiment: power-scaling needs gains.fixed = true");
      const int n_sc = static_cast<int>(sweep[point]);
      const int n_bs = static_cast<int>(cfg.law.lambda * n_sc + 0.5);
      row.push_back(static_cast<double>(n_sc));
      const bool case_two = cfg.law.law_case == ScalingLaw::Case::kScaledPilot;
      const double p_pilot =
          case_two ? cfg.law.e_tau / std::pow(n_sc, cfg.law.theta) : cfg.law.e_tau;
      for (PrecoderKind k : kinds) {
        for (int g : (cfg.gamma_list.empty() ? std::vector<int>{1, 2, 4, 8} : cfg.gamma_list)) {
          const Scenario scn =
              symmetric_scenario(cfg.s, cfg.k, cfg.l, n_bs, n_sc, g, cfg.gain_table, 1.0, 1.0,
                                 p_pilot, cfg.table_noise, cfg.coherence);
          RequiredPowerOptions opts;
          const RequiredPower req = required_power(scn, cfg.target_rate, k, opts);
          row.push_back(req.feasible_bs ? mw_to_dbm(req.p_bs) : arma::datum::nan);
          row.push_back(req.feasible_sc ? mw_to_dbm(req.p_sc) : arma::datum::nan);
          row.push_back(req.feasible_bs && req.feasible_sc ? 1.0 : 0.0);
          point_feasible = point_feasible && req.feasible_bs && req.feasible_sc;
        }
      }
    } else {
      const bool gamma_sweep = cfg.kind == Kind::kPrSweep;
      const int gamma = gamma_sweep ? static_cast<int>(sweep[point]) : cfg.derived_reuse();
      if (cfg.s % gamma != 0)
        throw ConfigError("run_experiment: swept reuse factor must divide S");
      const double p_bs_dbm = gamma_sweep ? cfg.p_bs_dbm : sweep[point];
      const double p_bs = cfg.use_gain_table ? db_to_linear(p_bs_dbm) : dbm_to_mw(p_bs_dbm);
      const double p_sc = cfg.use_gain_table ? db_to_linear(p_bs_dbm - cfg.sc_offset_db)
                                             : dbm_to_mw(p_bs_dbm - cfg.sc_offset_db);
      const SystemContext ctx = make_context(cfg, gamma, p_bs, p_sc);
      if (gamma_sweep) {
        row.push_back(static_cast<double>(gamma));
        row.push_back(static_cast<double>(ctx.tau));
      } else {
        row.push_back(p_bs_dbm);
      }

      const std::size_t n_metric_groups =
          kinds.size() * (cfg.kind == Kind::kScheduling ? 3 : (cfg.kind == Kind::kOneTier ? 2 : 1));
      std::vector<Metrics> acc(n_metric_groups);
      std::vector<double> sched_acc(cfg.kind == Kind::kScheduling ? kinds.size() * 3 : 0, 0.0);
      int good_drops = 0;
      for (int drop = 0; drop < cfg.drops; ++drop) {
        DropData data;
        try {
          data = make_drop(cfg, point_key, drop, p_bs, p_sc);
        } catch (const InfeasibleError&) {
          point_retries += 100;
          continue;
        }
        point_retries += data.retries;
        std::size_t slot = 0;
        for (PrecoderKind k : kinds) {
          if (cfg.kind == Kind::kScheduling) {
            Rng rsa_rng(cfg.seed, kStreamScheduling, stream_tag(kStreamScheduling, point_key, drop));
            const Schedule s_rsa = rsa(data.pool, ctx, cfg.k, cfg.l, k, rsa_rng);
            const Schedule s_gsa = gsa(data.pool, ctx, cfg.k, cfg.l, k);
            ScalingLaw law;
            law.e_bs = ctx.p_bs * ctx.n_bs;
            law.e_sc = ctx.p_sc[0] * ctx.n_sc;
            law.lambda = static_cast<double>(ctx.n_bs) / std::max(1, ctx.n_sc);
            const Schedule s_asa = k == PrecoderKind::kMrt
                                       ? asa_mrt(data.pool, ctx, cfg.k, cfg.l, law)
                                       : asa_zft(data.pool, ctx, cfg.k, cfg.l, law);
            sched_acc[slot * 3 + 0] += s_rsa.objective;
            sched_acc[slot * 3 + 1] += s_gsa.objective;
            sched_acc[slot * 3 + 2] += s_asa.objective;
            ++slot;
            continue;
          }
          const Schedule sched = make_schedule(cfg, data.pool, ctx, k, point_key, drop);
          const Scenario scn = select_scenario(data.pool, ctx, sched.mue, sched.sue);
          Metrics m = eval_metrics(cfg, scn, k,
                                   stream_tag(kStreamMonteCarlo, point_key, drop,
                                              k == PrecoderKind::kMrt ? 0 : 1));
          m.objective = sched.objective;
          accumulate(acc[slot], m, good_drops);
          ++slot;
          if (cfg.kind == Kind::kOneTier) {
            const Scenario one = one_tier_scenario(cfg, data.pool, ctx, sched);
            Metrics m1 = eval_metrics(cfg, one, k,
                                      stream_tag(kStreamMonteCarlo, point_key, drop,
                                                 k == PrecoderKind::kMrt ? 2 : 3),
                                      static_cast<int>(sched.mue.size()));
            m1.objective = spectral_efficiency(m1.sum_bound, one.coherence, one.tau);
            accumulate(acc[slot], m1, good_drops);
            ++slot;
          }
        }
        ++good_drops;
      }
      point_feasible = good_drops > 0;
      if (cfg.kind == Kind::kScheduling) {
        for (double v : sched_acc) {
          row.push_back(point_feasible ? v / good_drops : arma::datum::nan);
        }
      } else {
        for (Metrics& m : acc) {
          finish_average(m, good_drops);
          if (!point_feasible) m = Metrics{};
          push_metric_values(row, m, with_mc);
        }
      }
    }

    row.push_back(point_feasible ? 1.0 : 0.0);
    row.push_back(static_cast<double>(cfg.seed));
    row.push_back(static_cast<double>(cfg.trials));
    table.rows.push_back(std::move(row));
    info.point_retries.push_back(point_retries);
    info.point_feasible.push_back(point_feasible ? 1 : 0);
  }

  info.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\n";
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g", row[c]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

void write_metadata(const ExperimentConfig& cfg, const RunInfo& info, const std::string& csv_path) {
  nlohmann::json j;
  j["config_hash"] = info.cfg_hash;
  j["seed"] = info.seed;
  j["version"] = info.version;
  j["workers"] = info.workers;
  j["trials"] = info.trials;
  j["drops"] = info.drops;
  j["point_retries"] = info.point_retries;
  j["point_feasible"] = info.point_feasible;
  j["runtime_seconds"] = info.runtime_seconds;
  j["config"] = canonical_dump(cfg);
  std::ofstream out(csv_path + ".meta.json");
  if (!out) throw std::runtime_error("write_metadata: cannot open sidecar for '" + csv_path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace hetsim
