// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/geometry.hpp"

#include <cmath>

#include "hetsim/common.hpp"

namespace hetsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double distance_m(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

NetworkLayout place_nodes(int n_sc_nodes, double sc_ring_radius_m, double cell_radius_m) {
  if (n_sc_nodes < 1) throw ConfigError("place_nodes: need at least one SC node");
  if (sc_ring_radius_m <= 0.0 || sc_ring_radius_m > cell_radius_m)
    throw ConfigError("place_nodes: require 0 < sc_ring_radius <= cell_radius");
  NetworkLayout layout;
  layout.bs = {0.0, 0.0};
  layout.cell_radius_m = cell_radius_m;
  layout.sc_ring_radius_m = sc_ring_radius_m;
  layout.sc.resize(n_sc_nodes);
  for (int s = 0; s < n_sc_nodes; ++s) {
    const double angle = kTwoPi * static_cast<double>(s) / static_cast<double>(n_sc_nodes);
    layout.sc[s] = {sc_ring_radius_m * std::cos(angle), sc_ring_radius_m * std::sin(angle)};
  }
  return layout;
}

NetworkLayout place_nodes_uniform(int n_sc_nodes, double cell_radius_m, Rng& rng) {
  if (n_sc_nodes < 1) throw ConfigError("place_nodes_uniform: need at least one SC node");
  if (cell_radius_m <= 0.0) throw ConfigError("place_nodes_uniform: cell radius must be positive");
  NetworkLayout layout;
  layout.bs = {0.0, 0.0};
  layout.cell_radius_m = cell_radius_m;
  layout.sc_ring_radius_m = 0.0;
  layout.sc.resize(n_sc_nodes);
  for (int s = 0; s < n_sc_nodes; ++s) {
    const double r = cell_radius_m * std::sqrt(rng.uniform());
    const double angle = kTwoPi * rng.uniform();
    layout.sc[s] = {r * std::cos(angle), r * std::sin(angle)};
  }
  return layout;
}

UserPopulation place_users(int n, double cell_radius_m, Rng& rng) {
  if (n < 0) throw ConfigError("place_users: negative user count");
  UserPopulation users;
  users.positions.reserve(n);
  for (int i = 0; i < n; ++i) {
    // Area-uniform draw: radius proportional to sqrt(u).
    const double r = cell_radius_m * std::sqrt(rng.uniform());
    const double angle = kTwoPi * rng.uniform();
    users.positions.push_back({r * std::cos(angle), r * std::sin(angle)});
  }
  return users;
}

double pathloss_db(PathlossModel model, double distance_km) {
  if (!(distance_km > 0.0)) throw std::domain_error("pathloss_db: distance must be positive");
  switch (model) {
    case PathlossModel::kMacro:
      return 128.1 + 37.6 * std::log10(distance_km);
    case PathlossModel::kSmallCell:
      return 140.7 + 36.7 * std::log10(distance_km);
  }
  throw std::domain_error("pathloss_db: unknown model");
}

double link_gain(PathlossModel model, double distance_m) {
  const double d = std::max(distance_m, kMinLinkDistanceM);
  return db_to_linear(-pathloss_db(model, d / 1000.0));
}

LargeScaleProfile large_scale_profile(const NetworkLayout& layout, const UserPopulation& users) {
  if (layout.sc.empty() || users.positions.empty())
    throw ConfigError("large_scale_profile: layout and users must be nonempty");
  const int n_sc = static_cast<int>(layout.sc.size());
  const int n_users = static_cast<int>(users.positions.size());
  LargeScaleProfile profile;
  profile.beta_bm.set_size(n_users);
  profile.beta_sm.set_size(n_sc, n_users);
  profile.association.assign(n_users, -1);
  for (int u = 0; u < n_users; ++u) {
    profile.beta_bm(u) = link_gain(PathlossModel::kMacro, distance_m(layout.bs, users.positions[u]));
    for (int s = 0; s < n_sc; ++s) {
      profile.beta_sm(s, u) =
          link_gain(PathlossModel::kSmallCell, distance_m(layout.sc[s], users.positions[u]));
    }
  }
  return profile;
}

void associate(LargeScaleProfile& profile, double kappa_bs, double kappa_sc, double p_bs,
               double p_sc) {
  if (kappa_bs <= 0.0 || kappa_sc <= 0.0) throw ConfigError("associate: bias factors must be positive");
  if (p_bs <= 0.0 || p_sc <= 0.0) throw ConfigError("associate: powers must be positive");
  const int n_users = profile.num_users();
  const int n_sc = profile.num_sc();
  profile.macro_users.clear();
  profile.sc_users.assign(n_sc, {});
  for (int u = 0; u < n_users; ++u) {
    double best = kappa_bs * p_bs * profile.beta_bm(u);
    int tag = -1;
    for (int s = 0; s < n_sc; ++s) {
      const double metric = kappa_sc * p_sc * profile.beta_sm(s, u);
      if (metric > best) {
        best = metric;
        tag = s;
      }
    }
    profile.association[u] = tag;
    if (tag < 0) {
      profile.macro_users.push_back(u);
    } else {
      profile.sc_users[tag].push_back(u);
    }
  }
}

}  // namespace hetsim
