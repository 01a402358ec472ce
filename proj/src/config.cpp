// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hetsim {

namespace {

std::string trim(const std::string& in) {
  std::size_t a = 0, b = in.size();
  while (a < b && std::isspace(static_cast<unsigned char>(in[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(in[b - 1]))) --b;
  return in.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key + ": '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double x = to_double(key, value);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) throw ConfigError("config: expected integer for " + key);
  return i;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace

int ExperimentConfig::derived_users() const {
  if (users > 0) return users;
  if (s == 8) return 200;
  if (s == 20) return 500;
  return 25 * s;
}

int ExperimentConfig::derived_n_sc() const {
  if (n_sc > 0) return n_sc;
  return std::max(1, static_cast<int>(static_cast<double>(n_bs) / lambda + 0.5));
}

int ExperimentConfig::derived_reuse() const { return reuse > 0 ? reuse : s; }

double ExperimentConfig::noise_mw() const {
  return dbm_to_mw(noise_density_dbm_hz + linear_to_db(bandwidth_hz));
}

void ExperimentConfig::validate() const {
  if (s < 1) throw ConfigError("config: need at least one SC (topology.s)");
  if (k < 1 || l < 1) throw ConfigError("config: sched.k and sched.l must be >= 1");
  const int gamma = derived_reuse();
  if (gamma < 1 || gamma > s || s % gamma != 0)
    throw ConfigError("config: pilot reuse factor must divide S (gamma must divide S)");
  if (coherence <= tau())
    throw ConfigError("config: coherence interval must exceed the training length");
  if (cell_radius_m <= 0.0 || ring_radius_m <= 0.0 || ring_radius_m > cell_radius_m)
    throw ConfigError("config: require 0 < ring radius <= cell radius");
  if (n_bs < 1) throw ConfigError("config: antennas.n_bs must be >= 1");
  if (lambda <= 0.0) throw ConfigError("config: antennas.lambda must be positive");
  if (kappa_bs <= 0.0 || kappa_sc <= 0.0) throw ConfigError("config: bias factors must be positive");
  if (trials < 1) throw ConfigError("config: mc.trials must be >= 1");
  if (workers < 1) throw ConfigError("config: mc.workers must be >= 1");
  if (drops < 1) throw ConfigError("config: experiment.drops must be >= 1");
  if (bandwidth_hz <= 0.0) throw ConfigError("config: power.bandwidth_hz must be positive");
  if (!run_mrt && !run_zft) throw ConfigError("config: at least one precoder must be enabled");
  for (int g : gamma_list) {
    if (g < 1 || g > s || s % g != 0)
      throw ConfigError("config: experiment.gamma_list entries must divide S");
  }
  if (target_rate <= 0.0) throw ConfigError("config: experiment.target_rate must be positive");
}

void apply_override(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "topology.s") c.s = to_int(key, value);
  else if (key == "topology.cell_radius_m") c.cell_radius_m = to_double(key, value);
  else if (key == "topology.ring_radius_m") c.ring_radius_m = to_double(key, value);
  else if (key == "topology.users") c.users = to_int(key, value);
  else if (key == "topology.one_tier") c.one_tier = to_bool(key, value);
  else if (key == "topology.sc_placement") {
    if (value == "ring") c.sc_placement = ExperimentConfig::ScPlacement::kRing;
    else if (value == "uniform") c.sc_placement = ExperimentConfig::ScPlacement::kUniform;
    else throw ConfigError("config: topology.sc_placement must be ring or uniform");
  }
  else if (key == "antennas.n_bs") c.n_bs = to_int(key, value);
  else if (key == "antennas.n_sc") c.n_sc = to_int(key, value);
  else if (key == "antennas.lambda") c.lambda = to_double(key, value);
  else if (key == "power.p_bs_dbm") c.p_bs_dbm = to_double(key, value);
  else if (key == "power.sc_offset_db") c.sc_offset_db = to_double(key, value);
  else if (key == "power.p_pilot_dbm") c.p_pilot_dbm = to_double(key, value);
  else if (key == "power.noise_density_dbm_hz") c.noise_density_dbm_hz = to_double(key, value);
  else if (key == "power.bandwidth_hz") c.bandwidth_hz = to_double(key, value);
  else if (key == "pilot.reuse") c.reuse = to_int(key, value);
  else if (key == "pilot.coherence") c.coherence = to_int(key, value);
  else if (key == "sched.k") c.k = to_int(key, value);
  else if (key == "sched.l") c.l = to_int(key, value);
  else if (key == "sched.algorithm") {
    if (value == "rsa") c.algorithm = ExperimentConfig::Algorithm::kRsa;
    else if (value == "gsa") c.algorithm = ExperimentConfig::Algorithm::kGsa;
    else if (value == "asa") c.algorithm = ExperimentConfig::Algorithm::kAsa;
    else throw ConfigError("config: sched.algorithm must be rsa, gsa or asa");
  }
  else if (key == "sched.kappa_bs") c.kappa_bs = to_double(key, value);
  else if (key == "sched.kappa_sc") c.kappa_sc = to_double(key, value);
  else if (key == "mc.trials") c.trials = to_int(key, value);
  else if (key == "mc.seed") c.seed = static_cast<std::uint64_t>(to_double(key, value));
  else if (key == "mc.workers") c.workers = to_int(key, value);
  else if (key == "mc.estimation") {
    if (value == "pipeline") c.estimation = EstimationMode::kPipeline;
    else if (value == "direct") c.estimation = EstimationMode::kDirect;
    else throw ConfigError("config: mc.estimation must be pipeline or direct");
  }
  else if (key == "mc.enabled") c.run_mc = to_bool(key, value);
  else if (key == "precoder") {
    c.run_mrt = value == "mrt" || value == "both";
    c.run_zft = value == "zft" || value == "both";
    if (!c.run_mrt && !c.run_zft) throw ConfigError("config: precoder must be mrt, zft or both");
  }
  else if (key == "experiment.kind") {
    if (value == "rate-sweep") c.kind = ExperimentConfig::Kind::kRateSweep;
    else if (value == "pr-sweep") c.kind = ExperimentConfig::Kind::kPrSweep;
    else if (value == "power-scaling") c.kind = ExperimentConfig::Kind::kPowerScaling;
    else if (value == "scheduling") c.kind = ExperimentConfig::Kind::kScheduling;
    else if (value == "one-tier") c.kind = ExperimentConfig::Kind::kOneTier;
    else throw ConfigError("config: unknown experiment.kind '" + value + "'");
  }
  else if (key == "experiment.drops") c.drops = to_int(key, value);
  else if (key == "experiment.pin_drops") c.pin_drops = to_bool(key, value);
  else if (key == "experiment.target_rate") c.target_rate = to_double(key, value);
  else if (key == "experiment.gamma_list") {
    c.gamma_list.clear();
    for (double g : to_list(key, value)) c.gamma_list.push_back(static_cast<int>(g));
  }
  else if (key == "sweep.values") c.sweep_values = to_list(key, value);
  else if (key == "gains.fixed") c.use_gain_table = to_bool(key, value);
  else if (key == "gains.bm") c.gain_table.bm = to_double(key, value);
  else if (key == "gains.bs") c.gain_table.bs = to_double(key, value);
  else if (key == "gains.ss_own") c.gain_table.ss_own = to_double(key, value);
  else if (key == "gains.ss_cross") c.gain_table.ss_cross = to_double(key, value);
  else if (key == "gains.sm") c.gain_table.sm = to_double(key, value);
  else if (key == "gains.noise") c.table_noise = to_double(key, value);
  else if (key == "gains.p_pilot") c.table_p_pilot = to_double(key, value);
  else if (key == "law.case") {
    if (value == "I" || value == "1") c.law.law_case = ScalingLaw::Case::kFixedPilot;
    else if (value == "II" || value == "2") c.law.law_case = ScalingLaw::Case::kScaledPilot;
    else throw ConfigError("config: law.case must be I or II");
  }
  else if (key == "law.theta") c.law.theta = to_double(key, value);
  else if (key == "law.chi") c.law.chi = to_double(key, value);
  else if (key == "law.eta") c.law.eta = to_double(key, value);
  else if (key == "law.e_tau_db") c.law.e_tau = db_to_linear(to_double(key, value));
  else if (key == "law.e_bs_db") c.law.e_bs = db_to_linear(to_double(key, value));
  else if (key == "law.e_sc_db") c.law.e_sc = db_to_linear(to_double(key, value));
  else if (key == "law.lambda") c.law.lambda = to_double(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + " is not key = value");
    apply_override(c, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string canonical_dump(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "topology.s = " << c.s << "\n";
  out << "topology.cell_radius_m = " << fmt(c.cell_radius_m) << "\n";
  out << "topology.ring_radius_m = " << fmt(c.ring_radius_m) << "\n";
  out << "topology.users = " << c.derived_users() << "\n";
  out << "topology.one_tier = " << (c.one_tier ? "true" : "false") << "\n";
  out << "topology.sc_placement = "
      << (c.sc_placement == ExperimentConfig::ScPlacement::kRing ? "ring" : "uniform") << "\n";
  out << "antennas.n_bs = " << c.n_bs << "\n";
  out << "antennas.n_sc = " << c.derived_n_sc() << "\n";
  out << "antennas.lambda = " << fmt(c.lambda) << "\n";
  out << "power.p_bs_dbm = " << fmt(c.p_bs_dbm) << "\n";
  out << "power.sc_offset_db = " << fmt(c.sc_offset_db) << "\n";
  out << "power.p_pilot_dbm = " << fmt(c.p_pilot_dbm) << "\n";
  out << "power.noise_density_dbm_hz = " << fmt(c.noise_density_dbm_hz) << "\n";
  out << "power.bandwidth_hz = " << fmt(c.bandwidth_hz) << "\n";
  out << "pilot.reuse = " << c.derived_reuse() << "\n";
  out << "pilot.coherence = " << c.coherence << "\n";
  out << "sched.k = " << c.k << "\n";
  out << "sched.l = " << c.l << "\n";
  out << "sched.algorithm = "
      << (c.algorithm == ExperimentConfig::Algorithm::kRsa
              ? "rsa"
              : c.algorithm == ExperimentConfig::Algorithm::kGsa ? "gsa" : "asa")
      << "\n";
  out << "sched.kappa_bs = " << fmt(c.kappa_bs) << "\n";
  out << "sched.kappa_sc = " << fmt(c.kappa_sc) << "\n";
  out << "mc.trials = " << c.trials << "\n";
  out << "mc.seed = " << c.seed << "\n";
  out << "mc.workers = " << c.workers << "\n";
  out << "mc.estimation = "
      << (c.estimation == EstimationMode::kPipeline ? "pipeline" : "direct") << "\n";
  out << "mc.enabled = " << (c.run_mc ? "true" : "false") << "\n";
  out << "precoder = " << (c.run_mrt && c.run_zft ? "both" : c.run_mrt ? "mrt" : "zft") << "\n";
  const char* kind = "rate-sweep";
  switch (c.kind) {
    case ExperimentConfig::Kind::kRateSweep: kind = "rate-sweep"; break;
    case ExperimentConfig::Kind::kPrSweep: kind = "pr-sweep"; break;
    case ExperimentConfig::Kind::kPowerScaling: kind = "power-scaling"; break;
    case ExperimentConfig::Kind::kScheduling: kind = "scheduling"; break;
    case ExperimentConfig::Kind::kOneTier: kind = "one-tier"; break;
  }
  out << "experiment.kind = " << kind << "\n";
  out << "experiment.drops = " << c.drops << "\n";
  out << "experiment.pin_drops = " << (c.pin_drops ? "true" : "false") << "\n";
  out << "experiment.target_rate = " << fmt(c.target_rate) << "\n";
  out << "experiment.gamma_list =";
  for (int g : c.gamma_list) out << " " << g;
  out << "\n";
  out << "sweep.values =";
  for (double v : c.sweep_values) out << " " << fmt(v);
  out << "\n";
  out << "gains.fixed = " << (c.use_gain_table ? "true" : "false") << "\n";
  out << "gains.bm = " << fmt(c.gain_table.bm) << "\n";
  out << "gains.bs = " << fmt(c.gain_table.bs) << "\n";
  out << "gains.ss_own = " << fmt(c.gain_table.ss_own) << "\n";
  out << "gains.ss_cross = " << fmt(c.gain_table.ss_cross) << "\n";
  out << "gains.sm = " << fmt(c.gain_table.sm) << "\n";
  out << "gains.noise = " << fmt(c.table_noise) << "\n";
  out << "gains.p_pilot = " << fmt(c.table_p_pilot) << "\n";
  out << "law.case = " << (c.law.law_case == ScalingLaw::Case::kFixedPilot ? "I" : "II") << "\n";
  out << "law.theta = " << fmt(c.law.theta) << "\n";
  out << "law.chi = " << fmt(c.law.chi) << "\n";
  out << "law.eta = " << fmt(c.law.eta) << "\n";
  out << "law.e_tau = " << fmt(c.law.e_tau) << "\n";
  out << "law.e_bs = " << fmt(c.law.e_bs) << "\n";
  out << "law.e_sc = " << fmt(c.law.e_sc) << "\n";
  out << "law.lambda = " << fmt(c.law.lambda) << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  const std::string dump = canonical_dump(c);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hetsim
