// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "oracles.hpp"
#include "risisac/bccd.hpp"
#include "risisac/errors.hpp"
#include "risisac/metrics.hpp"
#include "risisac/sdp.hpp"
#include "risisac/sysmodel.hpp"
#include "sdp_oracle.hpp"

using namespace risisac;

namespace {

void check_optimal_invariants(const SdpProblem& p, const SdpSolution& s) {
  REQUIRE(s.status == SdpStatus::optimal);
  const double budget = p.trace_budget;
  CHECK(std::abs(s.R_ss.matrix.trace().real() - budget) <= 1e-6 * budget);
  CHECK(hermitian_evd(s.R_ss.matrix).eigenvalues.minCoeff() >= -1e-8 * budget);
  CHECK(is_hermitian(s.R_ss.matrix, 1e-10));
  CHECK(s.R_ss.satisfies_invariants());
  CHECK(p.comm_value(s.R_ss.matrix) >= p.comm_rhs - 1e-6 * std::max(std::abs(p.comm_rhs), 1e-300));
  CHECK(p.sense_value(s.R_ss.matrix) >= p.sense_rhs - 1e-6 * std::max(std::abs(p.sense_rhs), 1e-300));
  CHECK(s.kkt_residual <= 1e-7);
  CHECK(s.objective_value == doctest::Approx(p.objective_at(s.R_ss.matrix)).epsilon(1e-12));
}

ScenarioConfig small_cfg() {
  ScenarioConfig c;
  c.L = 2;
  c.M_t = 2;
  c.M = 3;
  c.N_x = 2;
  c.N_y = 2;
  return c;
}

}  // namespace

TEST_CASE("dimension one is pinned by the trace equality") {
  SdpProblem p;
  p.dim = 1;
  p.trace_budget = 2.0;
  p.obj = ComplexMatrix::Constant(1, 1, 3.0);
  p.comm_mat = ComplexMatrix::Constant(1, 1, 1.0);
  p.comm_rhs = 1.5;
  p.sense_mat = ComplexMatrix::Constant(1, 1, -1.0);
  p.sense_rhs = -5.0;
  const SdpSolution s = solve_sdp(p);
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.R_ss.matrix(0, 0).real() == 2.0);
  CHECK(s.objective_value == 6.0);
  p.comm_rhs = 2.5;
  CHECK(solve_sdp(p).status == SdpStatus::infeasible);
}

TEST_CASE("flat objective returns a feasible point with zero objective") {
  RandomStream rng(71);
  SdpProblem p = oracle::random_problem(3, 1.0, 0.5, rng);
  p.obj.setZero();
  const SdpSolution s = solve_sdp(p);
  check_optimal_invariants(p, s);
  CHECK(s.objective_value == 0.0);
}

TEST_CASE("2x2 problems match the grid-search oracle") {
  RandomStream rng(72);
  for (int trial = 0; trial < 6; ++trial) {
    const SdpProblem p = oracle::random_problem(2, 0.5 + trial, 0.3 + 0.25 * (trial % 3), rng);
    const SdpSolution s = solve_sdp(p);
    check_optimal_invariants(p, s);
    const oracle::GridOptimum grid = oracle::grid_search_2x2(p);
    REQUIRE(grid.feasible);
    // the grid only visits feasible points, so it bounds the optimum from above
    CHECK(s.objective_value <= grid.value * (1 + 1e-6));
    CHECK(oracle::relative_error(s.objective_value, grid.value) <= 1e-4);
    const oracle::GridOptimum exact = oracle::bloch_ball_optimum(p);
    REQUIRE(exact.feasible);
    CHECK(oracle::relative_error(s.objective_value, exact.value) <= 1e-6);
  }
}

TEST_CASE("returned objective beats random feasible points") {
  RandomStream rng(73);
  for (int trial = 0; trial < 4; ++trial) {
    const SdpProblem p = oracle::random_problem(2 + trial, 1.0, 0.5, rng, trial % 2 == 1);
    const SdpSolution s = solve_sdp(p);
    check_optimal_invariants(p, s);
    const auto points = oracle::random_feasible_points(p, 1000, rng);
    CHECK(points.size() == 1000);
    for (const ComplexMatrix& r : points) CHECK(s.objective_value <= p.objective_at(r) + 1e-12);
  }
}

TEST_CASE("scaling the objective scales the value and keeps the argmin") {
  RandomStream rng(74);
  const SdpProblem p = oracle::random_problem(3, 1.0, 0.6, rng);
  SdpProblem q = p;
  q.obj *= 7.5;
  const SdpSolution a = solve_sdp(p), b = solve_sdp(q);
  CHECK(oracle::max_abs_diff(a.R_ss.matrix, b.R_ss.matrix) <= 1e-6);
  CHECK(oracle::relative_error(b.objective_value, 7.5 * a.objective_value) <= 1e-6);
}

TEST_CASE("unreachable constraints are reported as infeasible") {
  RandomStream rng(75);
  SdpProblem p = oracle::random_problem(3, 1.0, 0.5, rng);
  p.comm_rhs = 2.0 * hermitian_evd(p.comm_mat).eigenvalues(0);
  const SdpSolution s = solve_sdp(p);
  CHECK(s.status == SdpStatus::infeasible);
  CHECK(s.max_violation > 0.0);
  CHECK(std::abs(s.R_ss.matrix.trace().real() - 1.0) <= 1e-12);
}

TEST_CASE("larger random problems solve to optimality") {
  RandomStream rng(76);
  for (int n : {4, 6, 8, 12}) {
    const SdpProblem p = oracle::random_problem(n, 3.0, 0.8, rng, n % 4 == 0);
    const SdpSolution s = solve_sdp(p);
    check_optimal_invariants(p, s);
  }
}

TEST_CASE("problem validation") {
  SdpProblem p;
  CHECK_THROWS_AS(p.validate(), DimensionError);
  p.dim = 2;
  p.obj = p.comm_mat = p.sense_mat = ComplexMatrix::Identity(2, 2);
  p.trace_budget = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.trace_budget = 1.0;
  p.obj(0, 1) = 1.0;
  CHECK_THROWS_AS(p.validate(), SymmetryError);
}

TEST_CASE("assembled coefficients match the dense construction and the metrics") {
  ScenarioConfig cfg = small_cfg();
  cfg.obstacles.push_back(Obstacle{1.0, 40.0, 50.0});
  const ChannelSet ch = generate_channels(cfg, RandomStream(77));
  RandomStream rng(78);
  const ComplexVector w = rng.unit_phase_vector(cfg.L * cfg.M);
  const ComplexVector phi = rng.unit_phase_vector(cfg.N());
  const EffectiveChannels eff = build_effective_channels(ch, phi);
  const SdpProblem p = assemble_p2(w, phi, ch, eff, cfg);
  const Index L = cfg.L;

  const ComplexMatrix ac = oracle::dense_kron_identity(oracle::oracle_pi_channel(ch, phi), L);
  const ComplexMatrix ar = oracle::dense_kron_identity(oracle::oracle_sensing_channel(ch, phi), L);
  const ComplexMatrix ao = oracle::dense_kron_identity(eff.Ao_block, L);
  const ComplexMatrix hc = oracle::dense_kron_identity(oracle::oracle_comm_channel(ch, phi), L);
  const ComplexMatrix ww = oracle::outer(w, w);
  auto gram = [&](const ComplexMatrix& a) { return oracle::naive_product(oracle::naive_product(oracle::adjoint(a), ww), a); };
  const double gs = cfg.gamma_sense();
  const ComplexMatrix sense = gram(ar) - gs * gram(ac) - gs * gram(ao);
  const double scale = gram(ac).norm();
  CHECK(oracle::max_abs_diff(p.obj, gram(ac)) <= 1e-12 * scale);
  CHECK(oracle::max_abs_diff(p.sense_mat, sense) <= 1e-12 * std::max(sense.norm(), scale));
  CHECK(oracle::max_abs_diff(p.comm_mat, oracle::naive_product(oracle::adjoint(hc), hc)) <=
        1e-12 * p.comm_mat.norm());
  CHECK(p.comm_rhs == doctest::Approx(cfg.gamma_comm() * cfg.M_r * L * cfg.sigma_c2()).epsilon(1e-15));
  CHECK(p.sense_rhs == doctest::Approx(gs * cfg.sigma_r2() * L * cfg.M).epsilon(1e-15));
  CHECK(p.trace_budget == cfg.P_B());

  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix R = oracle::random_psd(L * cfg.M_t, rng);
    const PowerBreakdown pb = compute_breakdown(eff, w, R, cfg);
    CHECK(oracle::relative_error(p.objective_at(R), pb.P_PI) <= 1e-10);
    const double sense_expected = pb.P_sense - gs * (pb.P_PI + pb.P_obs);
    CHECK(std::abs(p.sense_value(R) - sense_expected) <= 1e-10 * (pb.P_sense + gs * (pb.P_PI + pb.P_obs)));
    const double comm = comm_snr(eff.Hc_block, R, cfg.M_r, L, cfg.sigma_c2()) * cfg.M_r * L * cfg.sigma_c2();
    CHECK(oracle::relative_error(p.comm_value(R), comm) <= 1e-10);
  }
}

TEST_CASE("no obstacles and a zero sensing target simplify the sensing constraint") {
  ScenarioConfig cfg = small_cfg();
  const ChannelSet ch = generate_channels(cfg, RandomStream(79));
  RandomStream rng(80);
  const ComplexVector w = rng.unit_phase_vector(cfg.L * cfg.M);
  const ComplexVector phi = rng.unit_phase_vector(cfg.N());
  const EffectiveChannels eff = build_effective_channels(ch, phi);
  const SdpProblem p = assemble_p2(w, phi, ch, eff, cfg);
  const ComplexMatrix ar_gram = beamformed_gram(eff.Ar_block, w, cfg.L);
  CHECK(oracle::max_abs_diff(p.sense_mat, ar_gram - cfg.gamma_sense() * p.obj) <= 1e-15 * ar_gram.norm() + 1e-300);

  cfg.gamma_sense_dB = -std::numeric_limits<double>::infinity();
  REQUIRE(cfg.gamma_sense() == 0.0);
  const SdpProblem q = assemble_p2(w, phi, ch, eff, cfg);
  CHECK(q.sense_rhs == 0.0);
  CHECK(q.sense_mat == hermitian_part(ar_gram));
}

TEST_CASE("assemble_p2 rejects inconsistent inputs") {
  ScenarioConfig cfg = small_cfg();
  const ChannelSet ch = generate_channels(cfg, RandomStream(81));
  const ComplexVector phi = ComplexVector::Ones(cfg.N());
  const EffectiveChannels eff = build_effective_channels(ch, phi);
  CHECK_THROWS_AS(assemble_p2(ComplexVector::Ones(5), phi, ch, eff, cfg), DimensionError);
  CHECK_THROWS_AS(assemble_p2(ComplexVector::Constant(6, 2.0), phi, ch, eff, cfg), DomainError);
}

TEST_CASE("covariance subproblem of a generated scenario") {
  ScenarioConfig cfg = small_cfg();
  const ChannelSet ch = generate_channels(cfg, RandomStream(82));
  RandomStream rng(83);
  const ComplexVector w = rng.unit_phase_vector(cfg.L * cfg.M);
  const ComplexVector phi = rng.unit_phase_vector(cfg.N());
  const EffectiveChannels eff = build_effective_channels(ch, phi);
  const SdpProblem p = assemble_p2(w, phi, ch, eff, cfg);
  const SdpSolution s = solve_sdp(p);
  check_optimal_invariants(p, s);
  const PowerBreakdown pb = compute_breakdown(eff, w, s.R_ss.matrix, cfg);
  CHECK(pb.sndr_dB >= cfg.gamma_sense_dB - 0.01);
  CHECK(pb.comm_snr_dB >= cfg.gamma_comm_dB - 0.01);
  RandomStream rss(84);
  const TransmitCovariance start = init_rss(cfg.L * cfg.M_t, cfg.P_B(), rss);
  CHECK(s.objective_value <= p.objective_at(start.matrix));
}
