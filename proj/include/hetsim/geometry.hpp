// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef HETSIM_GEOMETRY_HPP
#define HETSIM_GEOMETRY_HPP

#include <armadillo>
#include <vector>

#include "hetsim/rng.hpp"

namespace hetsim {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance_m(const Point& a, const Point& b);

// Two-tier cell geometry: macro BS at the origin, S small-cell nodes inside
// the macro cell.
struct NetworkLayout {
  Point bs;
  std::vector<Point> sc;
  double cell_radius_m = 0.0;
  double sc_ring_radius_m = 0.0;
};

// Deterministic placement: S nodes equally angularly spaced on the ring,
// node s at angle 2*pi*s/S.
NetworkLayout place_nodes(int n_sc_nodes, double sc_ring_radius_m, double cell_radius_m);

// Alternative placement with nodes uniform over the disk (area-uniform).
NetworkLayout place_nodes_uniform(int n_sc_nodes, double cell_radius_m, Rng& rng);

struct UserPopulation {
  std::vector<Point> positions;
};

// n users i.i.d. area-uniform over the disk of the given radius.
UserPopulation place_users(int n, double cell_radius_m, Rng& rng);

enum class PathlossModel { kMacro, kSmallCell };

// 3GPP-style distance pathloss, distance in km:
//   macro: 128.1 + 37.6 log10(d), small cell: 140.7 + 36.7 log10(d).
double pathloss_db(PathlossModel model, double distance_km);

// Linear large-scale gain for one link; distances below the 10 m clamp are
// evaluated at the clamp.
double link_gain(PathlossModel model, double distance_m);

// Large-scale coefficients for every node->user link plus the association
// bookkeeping. beta_sm is S x U; association entry is -1 for the macro BS,
// otherwise the small-cell index.
struct LargeScaleProfile {
  arma::vec beta_bm;                         // U: BS -> user, linear
  arma::mat beta_sm;                         // S x U: SC -> user, linear
  std::vector<int> association;              // per user
  std::vector<int> macro_users;              // candidate MUE set U_M
  std::vector<std::vector<int>> sc_users;    // candidate SUE sets U_S^(m)
  int num_users() const { return static_cast<int>(beta_bm.n_elem); }
  int num_sc() const { return static_cast<int>(beta_sm.n_rows); }
};

LargeScaleProfile large_scale_profile(const NetworkLayout& layout, const UserPopulation& users);

// Biased association: each user joins the arg-max of
// {kappa_bs * p_bs * beta_bm} u {kappa_sc * p_sc * beta_sm(s)}.
// Ties resolve toward the macro cell, then the lowest SC index.
void associate(LargeScaleProfile& profile, double kappa_bs, double kappa_sc, double p_bs,
               double p_sc);

}  // namespace hetsim

#endif  // HETSIM_GEOMETRY_HPP
