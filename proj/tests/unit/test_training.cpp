// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hetsim/training.hpp"

using namespace hetsim;

namespace {

Scenario contaminated_scenario(int n_cells = 4, int reuse = 2) {
  GainTable gains;
  gains.bm = 1.0;
  gains.bs = 0.2;
  gains.ss_own = 5.0;
  gains.ss_cross = 0.6;
  gains.sm = 0.6;
  return symmetric_scenario(n_cells, 3, 2, 12, 6, reuse, gains, 2.0, 1.0, 1.0, 1.0);
}

}  // namespace

TEST_CASE("pilot groups follow the arithmetic progression") {
  const auto g82 = pilot_groups(8, 2);
  REQUIRE(g82.size() == 2);
  CHECK(g82[0] == std::vector<int>{0, 2, 4, 6});  // 1-based: {1,3,5,7}
  CHECK(g82[1] == std::vector<int>{1, 3, 5, 7});  // 1-based: {2,4,6,8}

  const auto gss = pilot_groups(5, 5);
  REQUIRE(gss.size() == 5);
  for (int r = 0; r < 5; ++r) CHECK(gss[r] == std::vector<int>{r});

  const auto g204 = pilot_groups(20, 4);
  REQUIRE(g204.size() == 4);
  CHECK(g204[0] == std::vector<int>{0, 4, 8, 12, 16});
  CHECK(g204[3] == std::vector<int>{3, 7, 11, 15, 19});

  CHECK_THROWS_AS(pilot_groups(8, 3), ConfigError);
  CHECK_THROWS_AS(pilot_groups(8, 0), ConfigError);
  CHECK_THROWS_AS(pilot_groups(8, 16), ConfigError);
}

TEST_CASE("pilot rows are exactly orthonormal") {
  const PilotPlan plan = build_pilots(20, 4, 8);
  CHECK(plan.tau == 52);
  const arma::cx_mat eye_k = plan.mue * plan.mue.t();
  CHECK(arma::norm(eye_k - arma::eye<arma::cx_mat>(20, 20), "fro") < 1e-12);
  for (int r = 0; r < 8; ++r) {
    const arma::cx_mat eye_l = plan.sue[r] * plan.sue[r].t();
    CHECK(arma::norm(eye_l - arma::eye<arma::cx_mat>(4, 4), "fro") < 1e-12);
    CHECK(arma::norm(plan.mue * plan.sue[r].t(), "fro") < 1e-12);
    for (int t = r + 1; t < 8; ++t) {
      CHECK(arma::norm(plan.sue[r] * plan.sue[t].t(), "fro") < 1e-12);
    }
  }
}

TEST_CASE("effective gain closed forms") {
  // beta = 1, tau p = 1, sigma^2 = 1 -> 0.5
  Scenario s = contaminated_scenario(4, 4);  // no reuse
  s.beta_bm = arma::vec{1.0, 1.0, 1.0};
  s.tau = 1;
  s.p_pilot = 1.0;
  const EffectiveGains g = effective_gains(s);
  CHECK(g.bm(0) == doctest::Approx(0.5).epsilon(1e-12));

  // own gain 5 against three co-pilot gains 0.6 with huge pilot energy:
  // 25 / 6.8
  Scenario c = contaminated_scenario(4, 1);  // all four cells share pilots
  c.p_pilot = 1e12;
  const EffectiveGains gc = effective_gains(c);
  CHECK(gc.ss_own[0](0) == doctest::Approx(25.0 / 6.8).epsilon(1e-9));

  // perfect-training limit: gamma = S and huge pilot energy recovers beta
  Scenario p = contaminated_scenario(4, 4);
  p.p_pilot = 1e12;
  const EffectiveGains gp = effective_gains(p);
  CHECK(gp.bm(0) == doctest::Approx(p.beta_bm(0)).epsilon(1e-9));
  CHECK(gp.ss_own[2](1) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("estimation never adds energy and the cross identity is exact") {
  const Scenario s = contaminated_scenario(8, 2);
  const EffectiveGains g = effective_gains(s);
  for (int i = 0; i < s.num_mue(); ++i) CHECK(g.bm(i) < s.beta_bm(i));
  for (int m = 0; m < s.num_sc(); ++m) {
    for (int j = 0; j < s.num_sue(m); ++j) {
      CHECK(g.ss_own[m](j) < s.beta_ss[m][m](j));
      CHECK(g.ss_own[m](j) > 0.0);
    }
    for (int n : s.copilots(m)) {
      for (int j = 0; j < s.num_sue(m); ++j) {
        // beta_hat(n,m,j) = beta_hat(n,n,j) * (beta(n,m,j)/beta(n,n,j))^2
        const double expected = g.ss_own[n](j) *
                                std::pow(s.beta_ss[n][m](j) / s.beta_ss[n][n](j), 2);
        CHECK(g.ss_cross[n][m](j) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("training reception energy bookkeeping") {
  const Scenario s = contaminated_scenario(4, 2);
  const PilotPlan plan = build_pilots(s.num_mue(), 2, s.reuse);
  const double tau_p = s.tau * s.p_pilot;
  REQUIRE(plan.tau == s.tau);

  // zero channels -> observation is exactly the noise realization
  ChannelDraw zero;
  zero.g_bm.zeros(s.n_bs, s.num_mue());
  zero.g_bs.assign(4, arma::cx_mat(s.n_bs, 2, arma::fill::zeros));
  zero.g_sm.assign(4, arma::cx_mat(s.n_sc, s.num_mue(), arma::fill::zeros));
  zero.g_ss.assign(4, std::vector<arma::cx_mat>(4, arma::cx_mat(s.n_sc, 2, arma::fill::zeros)));
  Rng rng_probe(31), rng_ref(31);
  const TrainingSignals quiet = receive_training(zero, plan, s, rng_probe);
  const arma::cx_mat expected_noise = draw_noise(s.n_bs, plan.tau, s.noise, rng_ref);
  CHECK(arma::norm(quiet.y_bs - expected_noise, "fro") == 0.0);

  // E ||Y_BS||_F^2 = tau p N_BS (sum of beta into the BS) + N_BS tau sigma^2
  double beta_sum = arma::accu(s.beta_bm);
  for (int m = 0; m < 4; ++m) beta_sum += arma::accu(s.beta_bs[m]);
  const double expected = tau_p * s.n_bs * beta_sum + s.n_bs * s.tau * s.noise;
  Rng rng(17);
  double acc = 0.0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const ChannelDraw draw = draw_channels(s, rng);
    const TrainingSignals sig = receive_training(draw, plan, s, rng);
    acc += std::pow(arma::norm(sig.y_bs, "fro"), 2);
  }
  CHECK(acc / trials == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("single-user estimate converges at high pilot power") {
  GainTable gains;
  Scenario s = symmetric_scenario(1, 1, 1, 16, 4, 1, gains, 1.0, 1.0, 1e9, 1.0);
  s.beta_bs[0](0) = 0.0;  // isolate the macro link
  s.beta_ss[0][0](0) = 0.0;
  s.beta_sm[0](0) = 0.0;
  const PilotPlan plan = build_pilots(1, 1, 1);
  Rng rng(5);
  const ChannelDraw draw = draw_channels(s, rng);
  const TrainingSignals sig = receive_training(draw, plan, s, rng);
  const ChannelEstimate est = mmse_estimate(sig, plan, s);
  // estimation error is O(sigma / sqrt(tau p)) ~ 2e-5 per entry here
  CHECK(arma::norm(est.g_hat_bm - draw.g_bm, "fro") < 1e-3);
}

TEST_CASE("pipeline estimate statistics match the closed forms") {
  const Scenario s = contaminated_scenario(4, 2);
  const EffectiveGains g = effective_gains(s);
  const PilotPlan plan = build_pilots(s.num_mue(), 2, s.reuse);
  const int trials = 10000;
  Rng rng(77);
  double var_bm = 0.0, var_ss = 0.0;
  arma::cx_double corr(0.0, 0.0);
  for (int t = 0; t < trials; ++t) {
    const ChannelDraw draw = draw_channels(s, rng);
    const TrainingSignals sig = receive_training(draw, plan, s, rng);
    const ChannelEstimate est = mmse_estimate(sig, plan, s);
    var_bm += std::norm(est.g_hat_bm(0, 0));
    var_ss += std::norm(est.g_hat_ss[1](0, 0));
    const arma::cx_vec xi = draw.g_ss[1][1].col(0) - est.g_hat_ss[1].col(0);
    corr += est.g_hat_ss[1](0, 0) * std::conj(xi(0));
  }
  var_bm /= trials;
  var_ss /= trials;
  CHECK(var_bm == doctest::Approx(g.bm(0)).epsilon(0.02));
  CHECK(var_ss == doctest::Approx(g.ss_own[1](0)).epsilon(0.02));
  // MMSE orthogonality: the estimate/error correlation is zero within 3 SE
  const double se = std::sqrt(g.ss_own[1](0) * (s.beta_ss[1][1](0) - g.ss_own[1](0)) /
                              static_cast<double>(trials));
  CHECK(std::abs(corr) / static_cast<double>(trials) < 3.0 * se);
}

TEST_CASE("macro-only scenarios run the full training pipeline") {
  Scenario s;
  s.n_bs = 24;
  s.n_sc = 0;
  s.reuse = 1;
  s.tau = 3;
  s.coherence = 200;
  s.p_bs = 2.0;
  s.p_pilot = 1.0;
  s.noise = 1.0;
  s.beta_bm = {0.5, 1.0, 2.0};
  const EffectiveGains g = effective_gains(s);
  Rng rng(3);
  const auto [draw, est] = draw_trial(s, g, EstimationMode::kPipeline, rng);
  CHECK(est.g_hat_bm.n_cols == 3);
  CHECK(est.g_hat_ss.empty());
}

TEST_CASE("direct estimation path is limited to the no-reuse pattern") {
  const Scenario reuse = contaminated_scenario(4, 2);
  const EffectiveGains g = effective_gains(reuse);
  Rng rng(1);
  CHECK_THROWS_AS(draw_trial(reuse, g, EstimationMode::kDirect, rng), ConfigError);

  const Scenario clean = contaminated_scenario(4, 4);
  const EffectiveGains gc = effective_gains(clean);
  Rng rng2(2);
  const auto [draw, est] = draw_trial(clean, gc, EstimationMode::kDirect, rng2);
  CHECK(draw.g_bm.n_cols == est.g_hat_bm.n_cols);
}
