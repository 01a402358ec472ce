// SPDX-License-Identifier: Apache-2.0
//
// hetsim - downlink system-level simulator for two-tier massive-MIMO networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "hetsim/channel.hpp"

#include <cmath>

namespace hetsim {

void fill_cgauss_columns(arma::cx_mat& out, const arma::vec& beta, Rng& rng) {
  for (arma::uword j = 0; j < out.n_cols; ++j) {
    const double scale = std::sqrt(0.5 * beta(j));
    for (arma::uword i = 0; i < out.n_rows; ++i) {
      const double re = scale * rng.gauss();
      const double im = scale * rng.gauss();
      out(i, j) = {re, im};
    }
  }
}

ChannelDraw draw_channels(const Scenario& s, Rng& rng) {
  if (s.n_bs < 1 || (s.num_sc() > 0 && s.n_sc < 1))
    throw ConfigError("draw_channels: antenna counts must be positive");
  const int n_cells = s.num_sc();
  ChannelDraw draw;
  draw.g_bm.set_size(s.n_bs, s.num_mue());
  fill_cgauss_columns(draw.g_bm, s.beta_bm, rng);
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
  for (int n = 0; n < n_cells; ++n) {
    for (int m = 0; m < n_cells; ++m) {
      draw.g_ss[n][m].set_size(s.n_sc, s.num_sue(m));
      fill_cgauss_columns(draw.g_ss[n][m], s.beta_ss[n][m], rng);
    }
  }
  return draw;
}

arma::cx_mat draw_noise(int rows, int cols, double sigma0_sq, Rng& rng) {
  if (sigma0_sq < 0.0) throw ConfigError("draw_noise: negative noise power");
  arma::cx_mat out(rows, cols);
  const double scale = std::sqrt(0.5 * sigma0_sq);
  for (arma::uword j = 0; j < out.n_cols; ++j) {
    for (arma::uword i = 0; i < out.n_rows; ++i) {
      const double re = scale * rng.gauss();
      const double im = scale * rng.gauss();
      out(i, j) = {re, im};
    }
  }
  return out;
}

}  // namespace hetsim
