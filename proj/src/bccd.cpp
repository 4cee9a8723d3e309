// SPDX-License-Identifier: Apache-2.0
#include "risisac/bccd.hpp"

#include <cmath>

#include "risisac/sysmodel.hpp"

namespace risisac {

void BccdConfig::validate() const {
  if (N_iter < 1) throw DomainError("BccdConfig: N_iter must be >= 1");
  if (!(sdp_tol > 0.0)) throw DomainError("BccdConfig: sdp_tol must be positive");
  if (sdp_max_iters < 1) throw DomainError("BccdConfig: sdp_max_iters must be >= 1");
  if (!(stall_tol >= 0.0)) throw DomainError("BccdConfig: stall_tol must be >= 0");
  rcg.validate();
}

TransmitCovariance init_rss(Index dim, double P_B, RandomStream& rng) {
  if (dim < 1) throw DimensionError("init_rss: dim must be >= 1");
  if (!(P_B > 0.0)) throw DomainError("init_rss: P_B must be positive");
  ComplexMatrix u(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      const double re = rng.uniform();
      const double im = rng.uniform();
      u(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix r = hermitian_part(u.adjoint() * u);
  r *= P_B / r.trace().real();
  return TransmitCovariance{std::move(r), P_B};
}

namespace {

BccdIteration record_state(const ChannelSet& ch, const ScenarioConfig& scen, const ComplexVector& w,
                           const ComplexVector& phi, const TransmitCovariance& R) {
  const EffectiveChannels eff = build_effective_channels(ch, phi);
  const PowerBreakdown p = compute_breakdown(eff, w, R.matrix, scen);
  BccdIteration it;
  it.P_PI = p.P_PI;
  it.P_sense = p.P_sense;
  it.P_obs = p.P_obs;
  it.P_noise = p.P_noise;
  it.sndr_dB = p.sndr_dB;
  it.comm_snr_dB = p.comm_snr_dB;
  it.dr_dB = p.dr_dB;
  it.R_ss = R;
  return it;
}

double relative_change(double prev, double cur) {
  if (prev == cur) return 0.0;
  const double ref = std::max(std::abs(prev), std::abs(cur));
  return std::abs(cur - prev) / ref;
}

}  // namespace

BccdResult bccd_solve(const BccdConfig& cfg, const ScenarioConfig& scen, const ChannelSet& ch) {
  cfg.validate();
  scen.validate();
  const Index L = scen.L;
  const Index lm = L * ch.M();
  const Index n = ch.N();
  if (ch.M() != scen.M || ch.M_t() != scen.M_t || ch.M_r() != scen.M_r || n != scen.N()) {
    throw DimensionError("bccd_solve: channel set does not match the scenario dimensions");
  }

  const RandomStream root(cfg.seed);
  RandomStream rss_rng = root.fork("rss");
  RandomStream x_rng = root.fork("x0");

  TransmitCovariance R = init_rss(L * ch.M_t(), scen.P_B(), rss_rng);
  BeamformerState x = BeamformerState::random(lm, n, x_rng);
  RcgConfig rcg_cfg = cfg.rcg;
  if (cfg.fixed_phi) {
    if (cfg.fixed_phi->size() != n) throw DimensionError("bccd_solve: fixed_phi has the wrong length");
    require_unit_modulus(*cfg.fixed_phi, "bccd_solve (fixed_phi)");
    x = BeamformerState::from_parts(x.w(), *cfg.fixed_phi);
    rcg_cfg.optimize_phi = false;
  }

  BccdResult result;
  // One scale for the whole run: the RCG step length and gradient
  // tolerance then refer to the interference at the random start.
  double form_scale = 1.0;
  {
    const PrecomputedForms forms0 = precompute_forms(hermitian_evd(R.matrix), ch, L);
    result.initial_P_PI = objective(x, forms0);
    if (result.initial_P_PI > 0.0 && std::isfinite(result.initial_P_PI)) {
      form_scale = 1.0 / std::sqrt(result.initial_P_PI);
    }
  }

  int stall_count = 0;
  for (int iter = 0; iter < cfg.N_iter; ++iter) {
    const PrecomputedForms forms = precompute_forms(hermitian_evd(R.matrix), ch, L).scaled(form_scale);
    RcgResult rcg = rcg_solve(forms, x, rcg_cfg);
    ++result.rcg_solves;
    x = rcg.x;

    const ComplexVector w = x.w();
    const ComplexVector phi = x.phi();
    const EffectiveChannels eff = build_effective_channels(ch, phi);
    const SdpProblem p2 = assemble_p2(w, phi, ch, eff, scen);
    const SdpSolution sol = solve_sdp(p2, cfg.sdp_tol, cfg.sdp_max_iters);
    ++result.sdp_solves;
    if (sol.status == SdpStatus::infeasible) {
      result.any_infeasible = true;
    } else {
      R = sol.R_ss;
    }

    BccdIteration rec = record_state(ch, scen, w, phi, R);
    rec.sdp_status = sol.status;
    rec.rcg_iterations = rcg.iterations;
    rec.rcg_history = std::move(rcg.history);
    if (!result.history.empty()) {
      const double change = relative_change(result.history.back().P_PI, rec.P_PI);
      stall_count = change < cfg.stall_tol ? stall_count + 1 : 0;
    }
    result.history.push_back(std::move(rec));
    if (stall_count >= 3) {
      result.converged = true;
      break;
    }
  }

  result.w = x.w();
  result.phi = x.phi();
  result.R_ss = R;
  return result;
}

}  // namespace risisac
