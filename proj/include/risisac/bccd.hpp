// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "risisac/manifold_rcg.hpp"
#include "risisac/metrics.hpp"
#include "risisac/random.hpp"
#include "risisac/scenario.hpp"
#include "risisac/sdp.hpp"

namespace risisac {

struct BccdConfig {
  int N_iter = 20;
  RcgConfig rcg;
  double sdp_tol = 1e-7;
  int sdp_max_iters = 50000;
  double stall_tol = 1e-4;  // relative P_PI change
  std::uint64_t seed = 1;
  /// When set, phi is frozen at this value and RCG only moves w.
  std::optional<ComplexVector> fixed_phi;

  void validate() const;
};

struct BccdIteration {
  double P_PI = 0.0;
  double P_sense = 0.0;
  double P_obs = 0.0;
  double P_noise = 0.0;
  double sndr_dB = 0.0;
  double comm_snr_dB = 0.0;
  double dr_dB = 0.0;
  SdpStatus sdp_status = SdpStatus::optimal;
  int rcg_iterations = 0;
  std::vector<double> rcg_history;  // normalised objective, f(x0) first
  TransmitCovariance R_ss;          // covariance at the end of the iteration
};

struct BccdResult {
  ComplexVector w;
  ComplexVector phi;
  TransmitCovariance R_ss;
  std::vector<BccdIteration> history;
  bool converged = false;
  bool any_infeasible = false;
  double initial_P_PI = 0.0;  // at the random start (x0, R_ss^(0))
  int rcg_solves = 0;
  int sdp_solves = 0;
};

/// R = U^H U with U(i, j) having independent U[0, 1) real and imaginary
/// parts, rescaled to trace P_B.
TransmitCovariance init_rss(Index dim, double P_B, RandomStream& rng);

BccdResult bccd_solve(const BccdConfig& cfg, const ScenarioConfig& scen, const ChannelSet& ch);

}  // namespace risisac
