// SPDX-License-Identifier: Apache-2.0
#include "risisac/self_check.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "risisac/bccd.hpp"
#include "risisac/manifold_rcg.hpp"
#include "risisac/metrics.hpp"
#include "risisac/sdp.hpp"
#include "risisac/sysmodel.hpp"

namespace risisac {

bool SelfCheckReport::all_passed() const {
  for (const CheckResult& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

void SelfCheckReport::print(std::ostream& os) const {
  for (const CheckResult& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << '\n';
  }
  int failed = 0;
  for (const CheckResult& c : checks) failed += c.passed ? 0 : 1;
  os << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed, "
     << scenario_checks << " scenario-dependent\n";
}

namespace {

std::string format_error(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "max error %.3g", value);
  return buf;
}

CheckResult run_guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    CheckResult r = body();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return CheckResult{name, false, std::string("threw: ") + e.what()};
  }
}

PrecomputedForms random_forms(Index lm, Index n, Index terms, RandomStream& rng) {
  PrecomputedForms forms;
  forms.lm = lm;
  forms.n = n;
  for (Index i = 0; i < terms; ++i) {
    forms.terms.push_back(FormTerm{rng.complex_normal_vector(lm), rng.complex_normal_matrix(lm, n)});
  }
  return forms;
}

ComplexVector random_tangent(const BeamformerState& x, RandomStream& rng) {
  return transport(x, rng.complex_normal_vector(x.size()));
}

// Central difference along a tangent direction against Re<grad, delta>.
double gradient_error(const PrecomputedForms& forms, RandomStream& rng, bool corrupt) {
  const BeamformerState x = BeamformerState::random(forms.lm, forms.n, rng);
  const ComplexVector delta = random_tangent(x, rng);
  ComplexVector grad = euclid_grad(x, forms);
  if (corrupt) grad = -grad;
  const double h = 1e-5;
  const double fd = (objective(retract(x, h * delta), forms) - objective(retract(x, -h * delta), forms)) / (2 * h);
  const double analytic = real_inner(grad, delta);
  return std::abs(fd - analytic) / std::max({std::abs(fd), std::abs(analytic), 1e-300});
}

CheckResult check_kron(RandomStream& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index L = 1 + trial % 3, rows = 1 + trial % 4, cols = 1 + (trial / 4) % 4;
    const ComplexMatrix h = rng.complex_normal_matrix(rows, cols);
    const ComplexVector v = rng.complex_normal_vector(L * cols);
    ComplexMatrix dense = ComplexMatrix::Zero(L * rows, L * cols);
    for (Index l = 0; l < L; ++l) dense.block(l * rows, l * cols, rows, cols) = h;
    worst = std::max(worst, (kron_identity_apply(h, v, L) - dense * v).cwiseAbs().maxCoeff());
    const ComplexVector w = rng.complex_normal_vector(L * rows);
    worst = std::max(worst, (kron_identity_adjoint_apply(h, w, L) - dense.adjoint() * w).cwiseAbs().maxCoeff());
  }
  return CheckResult{"", worst <= 1e-12, format_error(worst)};
}

CheckResult check_psd_projection(RandomStream& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix g = rng.complex_normal_matrix(4, 4);
    const ComplexMatrix a = hermitian_part(g);
    const ComplexMatrix p = psd_project(a);
    const EvdResult evd = hermitian_evd(p);
    worst = std::max(worst, -evd.eigenvalues(evd.eigenvalues.size() - 1));
    worst = std::max(worst, (psd_project(p) - p).norm());
  }
  return CheckResult{"", worst <= 1e-12, format_error(worst)};
}

CheckResult check_gradient_structural(RandomStream& rng, bool corrupt) {
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const PrecomputedForms forms = random_forms(1 + trial % 4, 1 + trial % 3, 1 + trial % 3, rng);
    worst = std::max(worst, gradient_error(forms, rng, corrupt));
  }
  return CheckResult{"", worst <= 1e-6, format_error(worst)};
}

CheckResult check_manifold(RandomStream& rng) {
  double modulus = 0.0, tangency = 0.0, rise = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const PrecomputedForms forms = random_forms(4, 3, 2, rng);
    const BeamformerState x0 = BeamformerState::random(4, 3, rng);
    RcgConfig cfg;
    cfg.max_iterations = 200;
    const RcgResult res = rcg_solve(forms, x0, cfg, [&](const RcgIterate& it) {
      modulus = std::max(modulus, it.x->modulus_error());
      for (const ComplexVector* v : {it.grad, it.direction}) {
        for (Index j = 0; j < v->size(); ++j) {
          tangency = std::max(tangency, std::abs(((*v)(j) * std::conj(it.x->x()(j))).real()));
        }
      }
    });
    for (std::size_t k = 1; k < res.history.size(); ++k) {
      rise = std::max(rise, res.history[k] - res.history[k - 1]);
    }
  }
  const bool ok = modulus <= 1e-12 && tangency <= 1e-10 && rise <= 1e-12;
  char buf[96];
  std::snprintf(buf, sizeof buf, "modulus %.2g, tangency %.2g, rise %.2g", modulus, tangency, rise);
  return CheckResult{"", ok, buf};
}

// 2x2 toy problem against a dense search over rank-one covariances.
CheckResult check_sdp_toy(RandomStream& rng) {
  SdpProblem p;
  p.dim = 2;
  p.trace_budget = 1.0;
  const ComplexVector u = rng.complex_normal_vector(2);
  p.obj = u * u.adjoint();
  p.comm_mat = ComplexMatrix::Identity(2, 2);
  p.comm_rhs = 0.5;
  const ComplexVector s = rng.complex_normal_vector(2);
  p.sense_mat = s * s.adjoint();
  p.sense_rhs = 0.25 * s.squaredNorm();
  const SdpSolution sol = solve_sdp(p);

  // extreme points of {tr X = 1, X PSD} are rank one; the optimum of a
  // linear objective with one active inequality mixes at most two of them
  double best = std::numeric_limits<double>::infinity();
  const int grid = 181;
  std::vector<ComplexVector> points;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < 2 * grid; ++b) {
      const double theta = kPi * a / (grid - 1), phase = kPi * b / grid;
      ComplexVector v(2);
      v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phase);
      points.push_back(v);
    }
  }
  std::vector<double> f(points.size()), g(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const ComplexMatrix x = points[k] * points[k].adjoint();
    f[k] = p.objective_at(x);
    g[k] = p.sense_value(x) - p.sense_rhs;
    if (g[k] >= 0.0) best = std::min(best, f[k]);
  }
  // mixtures of one feasible and one infeasible extreme point on the boundary
  for (std::size_t i = 0; i < points.size(); i += 7) {
    if (g[i] < 0.0) continue;
    for (std::size_t k = 0; k < points.size(); k += 7) {
      if (g[k] >= 0.0) continue;
      const double t = g[i] / (g[i] - g[k]);
      best = std::min(best, (1 - t) * f[i] + t * f[k]);
    }
  }
  const double err = sol.objective_value - best;
  const bool ok = sol.status == SdpStatus::optimal && sol.R_ss.satisfies_invariants() &&
                  err <= 1e-3 * std::max(1.0, std::abs(best));
  char buf[96];
  std::snprintf(buf, sizeof buf, "solver %.6g, search %.6g", sol.objective_value, best);
  return CheckResult{"", ok, buf};
}

CheckResult check_equivalence(const ScenarioConfig& scen, RandomStream& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const ChannelSet ch = generate_channels(scen, rng.fork("equivalence" + std::to_string(trial)));
    RandomStream local = rng.fork("equivalence_state" + std::to_string(trial));
    const TransmitCovariance R = init_rss(scen.L * scen.M_t, scen.P_B(), local);
    const BeamformerState x = BeamformerState::random(scen.L * scen.M, scen.N(), local);
    const PrecomputedForms forms = precompute_forms(hermitian_evd(R.matrix), ch, scen.L);
    const double f = objective(x, forms);
    const ComplexMatrix ac = build_pi_channel(ch, x.phi());
    const double p = power_quadratic(ac, x.w(), R.matrix);
    worst = std::max(worst, std::abs(f - p) / std::max({std::abs(f), std::abs(p), 1e-300}));
  }
  return CheckResult{"", worst <= 1e-10, format_error(worst)};
}

CheckResult check_gradient_scenario(const ScenarioConfig& scen, RandomStream& rng, bool corrupt) {
  const ChannelSet ch = generate_channels(scen, rng.fork("gradient"));
  RandomStream local = rng.fork("gradient_state");
  const TransmitCovariance R = init_rss(scen.L * scen.M_t, scen.P_B(), local);
  PrecomputedForms forms = precompute_forms(hermitian_evd(R.matrix), ch, scen.L);
  const BeamformerState probe = BeamformerState::random(scen.L * scen.M, scen.N(), local);
  const double f = objective(probe, forms);
  if (f > 0.0) forms = forms.scaled(1.0 / std::sqrt(f));
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) worst = std::max(worst, gradient_error(forms, local, corrupt));
  return CheckResult{"", worst <= 1e-6, format_error(worst)};
}

CheckResult check_noise_closed_form(const ScenarioConfig& scen, RandomStream& rng) {
  const ComplexVector w = rng.unit_phase_vector(scen.L * scen.M);
  const double expected = scen.sigma_r2() * scen.L * scen.M;
  const double got = power_noise(w, scen.sigma_r2());
  const double err = std::abs(got - expected) / expected;
  return CheckResult{"", err <= 1e-14, format_error(err)};
}

}  // namespace

SelfCheckReport self_check(const SelfCheckOptions& options) {
  SelfCheckReport report;
  const RandomStream root(options.seed);
  RandomStream kron_rng = root.fork("kron"), psd_rng = root.fork("psd"), grad_rng = root.fork("grad"),
               manifold_rng = root.fork("manifold"), sdp_rng = root.fork("sdp");

  report.checks.push_back(run_guarded("kronecker structure vs dense operator", [&] { return check_kron(kron_rng); }));
  report.checks.push_back(run_guarded("psd projection", [&] { return check_psd_projection(psd_rng); }));
  report.checks.push_back(run_guarded("gradient vs central difference (random forms)",
                                      [&] { return check_gradient_structural(grad_rng, options.corrupt_gradient); }));
  report.checks.push_back(run_guarded("manifold invariants along RCG runs", [&] { return check_manifold(manifold_rng); }));
  report.checks.push_back(run_guarded("2x2 covariance problem vs rank-one search", [&] { return check_sdp_toy(sdp_rng); }));

  for (std::size_t s = 0; s < options.scenarios.size(); ++s) {
    const ScenarioConfig& scen = options.scenarios[s];
    const std::string tag = "[scenario " + std::to_string(s) + "] ";
    RandomStream rng = root.fork("scenario" + std::to_string(s));
    report.checks.push_back(run_guarded(tag + "reduced objective equals interference power",
                                        [&] { scen.validate(); return check_equivalence(scen, rng); }));
    report.checks.push_back(run_guarded(tag + "gradient vs central difference", [&] {
      scen.validate();
      return check_gradient_scenario(scen, rng, options.corrupt_gradient);
    }));
    report.checks.push_back(run_guarded(tag + "noise power closed form",
                                        [&] { scen.validate(); return check_noise_closed_form(scen, rng); }));
    report.scenario_checks += 3;
  }
  return report;
}

}  // namespace risisac
