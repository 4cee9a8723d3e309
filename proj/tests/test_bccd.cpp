// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "oracles.hpp"
#include "risisac/bccd.hpp"
#include "risisac/errors.hpp"

using namespace risisac;

namespace {

ScenarioConfig desk() {
  ScenarioConfig s;
  s.M_t = 2;
  s.M = 4;
  s.N_x = 2;
  s.N_y = 2;
  s.L = 2;
  s.gamma_comm_dB = 0.0;
  s.gamma_sense_dB = 0.0;
  s.P_B_dB = 0.0;
  return s;
}

}  // namespace

TEST_CASE("init_rss builds a trace-normalised PSD matrix") {
  RandomStream rng(91);
  const TransmitCovariance one = init_rss(1, 2.5, rng);
  CHECK(one.matrix(0, 0).real() == doctest::Approx(2.5).epsilon(1e-15));
  for (int seed = 0; seed < 10; ++seed) {
    RandomStream r(seed);
    const TransmitCovariance c = init_rss(6, 3.0, r);
    CHECK(std::abs(c.matrix.trace().real() - 3.0) <= 1e-12);
    CHECK(hermitian_evd(c.matrix).eigenvalues.minCoeff() >= 0.0 - 1e-14);
    CHECK(c.satisfies_invariants());
  }
  RandomStream a(1), b(2);
  CHECK((init_rss(4, 1.0, a).matrix - init_rss(4, 1.0, b).matrix).norm() > 0.0);
  CHECK_THROWS_AS(init_rss(0, 1.0, a), DimensionError);
}

TEST_CASE("no path interference stays at zero and stalls after one window") {
  const ScenarioConfig s = desk();
  ChannelSet ch = generate_channels(s, RandomStream(92));
  ch.gains.dpi = 0.0;
  ch.gains.rpi = 0.0;
  BccdConfig cfg;
  const BccdResult r = bccd_solve(cfg, s, ch);
  for (const BccdIteration& it : r.history) CHECK(it.P_PI == 0.0);
  CHECK(r.converged);
  CHECK(r.history.size() == 4);
}

TEST_CASE("a single outer iteration runs one RCG and one SDP solve") {
  const ScenarioConfig s = desk();
  const ChannelSet ch = generate_channels(s, RandomStream(93));
  BccdConfig cfg;
  cfg.N_iter = 1;
  const BccdResult r = bccd_solve(cfg, s, ch);
  CHECK(r.history.size() == 1);
  CHECK(r.rcg_solves == 1);
  CHECK(r.sdp_solves == 1);
}

TEST_CASE("desk scenario reduces interference and settles") {
  const ScenarioConfig s = desk();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ChannelSet ch = generate_channels(s, RandomStream(100 + seed));
    BccdConfig cfg;
    cfg.N_iter = 20;
    cfg.seed = seed;
    const BccdResult r = bccd_solve(cfg, s, ch);
    REQUIRE(r.history.size() >= 4);
    CHECK(r.history.size() <= 20);
    CHECK(r.history.back().P_PI <= r.initial_P_PI);
    const std::size_t n = r.history.size();
    for (std::size_t k = n - 3; k < n; ++k) {
      const double prev = r.history[k - 1].P_PI, cur = r.history[k].P_PI;
      CHECK(std::abs(cur - prev) <= 1e-3 * std::max(prev, cur));
    }
    // per-iteration invariants
    for (const BccdIteration& it : r.history) {
      for (std::size_t k = 1; k < it.rcg_history.size(); ++k) {
        CHECK(it.rcg_history[k] <= it.rcg_history[k - 1] + 1e-12);
      }
      CHECK(it.R_ss.satisfies_invariants());
      if (it.sdp_status == SdpStatus::optimal) {
        CHECK(it.comm_snr_dB >= s.gamma_comm_dB - 0.01);
        CHECK(it.sndr_dB >= s.gamma_sense_dB - 0.01);
      }
    }
    double worst = 0.0;
    for (Index j = 0; j < r.w.size(); ++j) worst = std::max(worst, std::abs(std::abs(r.w(j)) - 1.0));
    for (Index j = 0; j < r.phi.size(); ++j) worst = std::max(worst, std::abs(std::abs(r.phi(j)) - 1.0));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("bccd_solve is reproducible") {
  const ScenarioConfig s = desk();
  const ChannelSet ch = generate_channels(s, RandomStream(94));
  BccdConfig cfg;
  cfg.seed = 17;
  const BccdResult a = bccd_solve(cfg, s, ch), b = bccd_solve(cfg, s, ch);
  REQUIRE(a.history.size() == b.history.size());
  CHECK(oracle::max_abs_diff(a.w, b.w) <= 1e-12);
  CHECK(oracle::max_abs_diff(a.phi, b.phi) <= 1e-12);
  CHECK(oracle::max_abs_diff(a.R_ss.matrix, b.R_ss.matrix) <= 1e-12);
  for (std::size_t k = 0; k < a.history.size(); ++k) CHECK(a.history[k].P_PI == b.history[k].P_PI);
}

TEST_CASE("an infeasible covariance step keeps the previous covariance") {
  ScenarioConfig s = desk();
  s.gamma_comm_dB = 200.0;
  const ChannelSet ch = generate_channels(s, RandomStream(95));
  BccdConfig cfg;
  cfg.N_iter = 5;
  cfg.seed = 3;
  const BccdResult r = bccd_solve(cfg, s, ch);
  CHECK(r.any_infeasible);
  CHECK(r.history.size() <= 5);
  for (const BccdIteration& it : r.history) CHECK(it.sdp_status == SdpStatus::infeasible);
  RandomStream rss = RandomStream(3).fork("rss");
  const TransmitCovariance start = init_rss(s.L * s.M_t, s.P_B(), rss);
  CHECK(r.R_ss.matrix == start.matrix);
}

TEST_CASE("a frozen phase vector is returned unchanged") {
  const ScenarioConfig s = desk();
  const ChannelSet ch = generate_channels(s, RandomStream(96));
  BccdConfig cfg;
  RandomStream rng(97);
  cfg.fixed_phi = rng.unit_phase_vector(s.N());
  const BccdResult r = bccd_solve(cfg, s, ch);
  CHECK(r.phi == *cfg.fixed_phi);
  cfg.fixed_phi = ComplexVector::Ones(s.N() + 1);
  CHECK_THROWS_AS(bccd_solve(cfg, s, ch), DimensionError);
}

TEST_CASE("BCCD configuration validation") {
  BccdConfig cfg;
  cfg.N_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  const ScenarioConfig s = desk();
  ScenarioConfig other = s;
  other.M = 5;
  CHECK_THROWS_AS(bccd_solve(BccdConfig{}, other, generate_channels(s, RandomStream(1))), DimensionError);
}
