// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hetsim/channel.hpp"
#include "hetsim/scenario.hpp"

using namespace hetsim;

namespace {

Scenario tiny_scenario() {
  GainTable gains;
  gains.bm = 0.8;
  gains.bs = 0.2;
  gains.ss_own = 5.0;
  gains.ss_cross = 0.6;
  gains.sm = 0.3;
  return symmetric_scenario(2, 2, 2, 8, 4, 2, gains, 1.0, 1.0, 1.0, 1.0);
}

}  // namespace

TEST_CASE("seed derivation separates streams and reproduces draws") {
  Rng a(11, 3, 7);
  Rng b(11, 3, 7);
  Rng c(11, 3, 8);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.gauss();
    all_equal = all_equal && x == b.gauss();
    any_diff = any_diff || x != c.gauss();
  }
  CHECK(all_equal);
  CHECK(any_diff);

  const Scenario s = tiny_scenario();
  Rng r1(5, 1, 2), r2(5, 1, 2);
  const ChannelDraw d1 = draw_channels(s, r1);
  const ChannelDraw d2 = draw_channels(s, r2);
  CHECK(arma::approx_equal(d1.g_bm, d2.g_bm, "absdiff", 0.0));
  CHECK(arma::approx_equal(d1.g_ss[1][0], d2.g_ss[1][0], "absdiff", 0.0));
}

TEST_CASE("channel columns carry the configured large-scale gain") {
  const int n = 8;
  const int draws = 10000;
  arma::vec beta = {0.7, 0.0, 2.5};
  Rng rng(99);
  arma::vec mean_energy(3, arma::fill::zeros);
  arma::cx_double cross(0.0, 0.0);
  for (int t = 0; t < draws; ++t) {
    arma::cx_mat g(n, 3);
    fill_cgauss_columns(g, beta, rng);
    for (int j = 0; j < 3; ++j) mean_energy(j) += std::pow(arma::norm(g.col(j)), 2);
    cross += arma::cdot(g.col(0), g.col(2));
  }
  mean_energy /= static_cast<double>(draws * n);
  CHECK(mean_energy(0) == doctest::Approx(0.7).epsilon(0.02));
  CHECK(mean_energy(1) == 0.0);  // zero-gain link gives an all-zero column
  CHECK(mean_energy(2) == doctest::Approx(2.5).epsilon(0.02));

  // distinct columns are uncorrelated: |E g_0^H g_2| within 3 sigma of zero
  const double sigma = std::sqrt(0.7 * 2.5 * n / static_cast<double>(draws));
  CHECK(std::abs(cross) / static_cast<double>(draws) < 3.0 * sigma);
}

TEST_CASE("generator energy is linear in the gain") {
  const int n = 16, draws = 4000;
  auto mean_energy = [&](double beta, std::uint64_t seed) {
    Rng rng(seed);
    arma::vec b = {beta};
    double acc = 0.0;
    for (int t = 0; t < draws; ++t) {
      arma::cx_mat g(n, 1);
      fill_cgauss_columns(g, b, rng);
      acc += std::pow(arma::norm(g.col(0)), 2);
    }
    return acc / (draws * n);
  };
  const double e1 = mean_energy(1.0, 313);
  const double e3 = mean_energy(3.0, 313);  // same seed: identical normals, scaled
  CHECK(e3 == doctest::Approx(3.0 * e1).epsilon(1e-12));
}

TEST_CASE("noise draws have the requested variance split over re/im") {
  Rng rng(2024);
  const arma::cx_mat z = draw_noise(200, 500, 0.0, rng);
  CHECK(arma::norm(z, "fro") == 0.0);

  Rng rng2(2025);
  const double sigma_sq = 0.37;
  const arma::cx_mat n = draw_noise(400, 250, sigma_sq, rng2);  // 1e5 samples
  const double var = arma::accu(arma::square(arma::abs(n))) / n.n_elem;
  CHECK(var == doctest::Approx(sigma_sq).epsilon(0.02));
  const double var_re = arma::accu(arma::square(arma::real(n))) / n.n_elem;
  const double var_im = arma::accu(arma::square(arma::imag(n))) / n.n_elem;
  CHECK(var_re == doctest::Approx(0.5 * sigma_sq).epsilon(0.02));
  CHECK(var_im == doctest::Approx(0.5 * sigma_sq).epsilon(0.02));
}
