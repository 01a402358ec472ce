// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hetsim/precoding.hpp"

using namespace hetsim;

namespace {

Scenario perfect_scenario(int n_cells, int n_mue, int n_sue, int n_bs, int n_sc) {
  GainTable gains;
  gains.bm = 1.0;
  gains.bs = 0.2;
  gains.ss_own = 5.0;
  gains.ss_cross = 0.6;
  gains.sm = 0.6;
  Scenario s = symmetric_scenario(n_cells, n_mue, n_sue, n_bs, n_sc, n_cells, gains, 1.0, 1.0,
                                  1.0, 1.0);
  s.perfect_csi = true;
  return s;
}

}  // namespace

TEST_CASE("normalization constants match the closed forms") {
  // MRT, K = 1, beta_hat = 1, p = 1: alpha = 1/sqrt(N)
  {
    Scenario s = perfect_scenario(1, 1, 1, 64, 4);
    const EffectiveGains g = effective_gains(s);
    const Alphas a = precoder_alphas(s, g, PrecoderKind::kMrt);
    CHECK(std::sqrt(a.bs_sq) == doctest::Approx(0.125).epsilon(1e-12));
  }
  // MRT, K = 2, beta_hat = {1, 3}, p = 2, N = 100: alpha = sqrt(2/400)
  {
    Scenario s = perfect_scenario(1, 2, 1, 100, 4);
    s.beta_bm = {1.0, 3.0};
    s.p_bs = 2.0;
    const EffectiveGains g = effective_gains(s);
    const Alphas a = precoder_alphas(s, g, PrecoderKind::kMrt);
    CHECK(std::sqrt(a.bs_sq) == doctest::Approx(std::sqrt(2.0 / 400.0)).epsilon(1e-12));
  }
  // ZFT, N = 4, K = 2, beta_hat = {1, 1}, p = 1: the complex-Wishart mean
  // E[Tr{(G^H G)^-1}] = Psi/(N - K) makes alpha = sqrt((N - K) p / Psi) = 1
  {
    Scenario s = perfect_scenario(1, 2, 1, 4, 4);
    const EffectiveGains g = effective_gains(s);
    const Alphas a = precoder_alphas(s, g, PrecoderKind::kZft);
    CHECK(std::sqrt(a.bs_sq) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("degenerate and undersized configurations are rejected") {
  Scenario s = perfect_scenario(1, 2, 1, 16, 4);
  EffectiveGains g = effective_gains(s);
  g.bm.zeros();
  CHECK_THROWS_AS(precoder_alphas(s, g, PrecoderKind::kMrt), DegenerateInputError);
  CHECK_THROWS_AS(precoder_alphas(s, g, PrecoderKind::kZft), DegenerateInputError);

  Scenario small = perfect_scenario(1, 2, 1, 3, 4);  // N_BS < K + 2
  const EffectiveGains gs = effective_gains(small);
  CHECK_THROWS_AS(precoder_alphas(small, gs, PrecoderKind::kZft), ConfigError);

  // a rank-deficient estimate is a numerical error that reports the
  // condition number rather than producing a garbage precoder
  Scenario dup = perfect_scenario(1, 2, 1, 16, 4);
  const EffectiveGains gd = effective_gains(dup);
  const Alphas a = precoder_alphas(dup, gd, PrecoderKind::kZft);
  Rng rng(13);
  auto [draw, est] = draw_trial(dup, gd, EstimationMode::kPipeline, rng);
  est.g_hat_bm.col(1) = est.g_hat_bm.col(0);
  CHECK_THROWS_AS(make_precoder(PrecoderKind::kZft, est, dup, a), NumericalError);
}

TEST_CASE("zero-forcing nulls every other user's estimated channel") {
  Scenario s = perfect_scenario(2, 4, 2, 16, 8);
  const EffectiveGains g = effective_gains(s);
  const Alphas a = precoder_alphas(s, g, PrecoderKind::kZft);
  Rng rng(101);
  for (int t = 0; t < 50; ++t) {
    const auto [draw, est] = draw_trial(s, g, EstimationMode::kPipeline, rng);
    const Precoder p = make_precoder(PrecoderKind::kZft, est, s, a);
    const arma::cx_mat prod = arma::strans(est.g_hat_bm) * p.w_bs;
    const arma::cx_mat target =
        std::complex<double>(p.alpha_bs, 0.0) * arma::eye<arma::cx_mat>(4, 4);
    CHECK(arma::abs(prod - target).max() < 1e-8);
    const arma::cx_mat prod_sc = arma::strans(est.g_hat_ss[1]) * p.w_sc[1];
    const arma::cx_mat target_sc =
        std::complex<double>(p.alpha_sc(1), 0.0) * arma::eye<arma::cx_mat>(2, 2);
    CHECK(arma::abs(prod_sc - target_sc).max() < 1e-8);
  }
}

TEST_CASE("transmit power meets the constraint in expectation") {
  GainTable gains;
  gains.bm = 1.3;
  Scenario s = symmetric_scenario(1, 4, 2, 16, 8, 1, gains, 2.5, 0.8, 1.0, 1.0);
  const EffectiveGains g = effective_gains(s);
  const int draws = 10000;
  for (PrecoderKind kind : {PrecoderKind::kMrt, PrecoderKind::kZft}) {
    const Alphas a = precoder_alphas(s, g, kind);
    Rng rng(kind == PrecoderKind::kMrt ? 7 : 8);
    double power_bs = 0.0, power_sc = 0.0;
    for (int t = 0; t < draws; ++t) {
      const auto [draw, est] = draw_trial(s, g, EstimationMode::kPipeline, rng);
      const Precoder p = make_precoder(kind, est, s, a);
      power_bs += std::pow(arma::norm(p.w_bs, "fro"), 2);
      power_sc += std::pow(arma::norm(p.w_sc[0], "fro"), 2);
    }
    CHECK(power_bs / draws == doctest::Approx(s.p_bs).epsilon(0.02));
    CHECK(power_sc / draws == doctest::Approx(s.p_sc[0]).epsilon(0.02));
  }
}

TEST_CASE("sampled complex Wishart matches the inverse-trace identities") {
  // W ~ W_m(I, n) with m = 4, n = 16:
  //   E[Tr W^-1] = m/(n-m) = 1/3
  //   E[Tr^2 W^-1] = m/(n-m) * (n/((n-m)^2 - 1) + (m-1)/(n-m+1)) = 49/429
  const int m = 4, n = 16, samples = 100000;
  Rng rng(400);
  double tr = 0.0, tr2 = 0.0;
  arma::vec ones(m, arma::fill::ones);
  for (int t = 0; t < samples; ++t) {
    arma::cx_mat g(n, m);
    fill_cgauss_columns(g, ones, rng);
    const arma::cx_mat w = g.t() * g;
    const double trace = arma::trace(arma::inv_sympd(w)).real();
    tr += trace;
    tr2 += trace * trace;
  }
  tr /= samples;
  tr2 /= samples;
  CHECK(tr == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  CHECK(tr2 == doctest::Approx(49.0 / 429.0).epsilon(0.05));
}
