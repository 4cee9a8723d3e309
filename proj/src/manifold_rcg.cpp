// SPDX-License-Identifier: Apache-2.0
#include "risisac/manifold_rcg.hpp"

#include <cmath>
#include <string>

namespace risisac {

BeamformerState::BeamformerState(ComplexVector x, Index lm) : x_(std::move(x)), lm_(lm) {
  if (lm_ < 0 || lm_ > x_.size()) throw DimensionError("BeamformerState: w length exceeds x length");
  for (Index j = 0; j < x_.size(); ++j) {
    const double r = std::abs(x_(j));
    if (std::abs(r - 1.0) > 1e-9) {
      throw DomainError("BeamformerState: entry " + std::to_string(j) + " is not unit modulus");
    }
    x_(j) /= r;
  }
}

BeamformerState BeamformerState::from_parts(const ComplexVector& w, const ComplexVector& phi) {
  ComplexVector x(w.size() + phi.size());
  x << w, phi;
  return BeamformerState(std::move(x), w.size());
}

BeamformerState BeamformerState::random(Index lm, Index n, RandomStream& rng) {
  ComplexVector x(lm + n);
  for (Index j = 0; j < lm + n; ++j) x(j) = rng.unit_phase();
  return BeamformerState(std::move(x), lm);
}

double BeamformerState::modulus_error() const {
  double worst = 0.0;
  for (Index j = 0; j < x_.size(); ++j) worst = std::max(worst, std::abs(std::abs(x_(j)) - 1.0));
  return worst;
}

PrecomputedForms PrecomputedForms::scaled(double factor) const {
  PrecomputedForms out = *this;
  for (FormTerm& t : out.terms) {
    t.b *= factor;
    t.c *= factor;
  }
  return out;
}

void RcgConfig::validate() const {
  if (max_iterations < 0) throw DomainError("RcgConfig: max_iterations must be >= 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw DomainError("RcgConfig: armijo_c1 must lie in (0, 1)");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw DomainError("RcgConfig: armijo_shrink must lie in (0, 1)");
  }
  if (!(alpha_init > 0.0)) throw DomainError("RcgConfig: alpha_init must be positive");
  if (max_shrinks < 0) throw DomainError("RcgConfig: max_shrinks must be >= 0");
  if (restart_period < 0) throw DomainError("RcgConfig: restart_period must be >= 0");
}

double RcgConfig::effective_grad_tol(Index dim) const {
  return grad_tol >= 0.0 ? grad_tol : 1e-8 * static_cast<double>(dim);
}

int RcgConfig::effective_restart_period(Index dim) const {
  return restart_period > 0 ? restart_period : static_cast<int>(std::max<Index>(dim, 1));
}

PrecomputedForms precompute_forms(const EvdResult& rss_evd, const ChannelSet& ch, Index L) {
  const Index M = ch.M(), M_t = ch.M_t(), N = ch.N();
  const Index dim = rss_evd.eigenvectors.rows();
  if (L < 1 || dim != L * M_t || rss_evd.eigenvalues.size() != dim) {
    throw DimensionError("precompute_forms: R_ss dimension " + std::to_string(dim) + " != L*M_t = " +
                         std::to_string(L * M_t));
  }
  const RealVector roots = guarded_sqrt_eigenvalues(rss_evd.eigenvalues);
  const ComplexMatrix g_adj = ch.G_rR.adjoint();  // M x N

  PrecomputedForms forms;
  forms.lm = L * M;
  forms.n = N;
  forms.terms.reserve(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    FormTerm term{ComplexVector::Zero(L * M), ComplexMatrix::Zero(L * M, N)};
    const double root = roots(i);
    if (root > 0.0) {
      const ComplexVector v = rss_evd.eigenvectors.col(i);
      term.b = (root * ch.gains.dpi) * kron_identity_apply(ch.H_DPI, v, L);
      if (ch.gains.rpi != 0.0) {
        const Complex scale = root * ch.gains.rpi;
        for (Index l = 0; l < L; ++l) {
          // G_rR^H diag(H_cR v^(l)): scale column n of G_rR^H by (H_cR v^(l))_n
          const ComplexVector d = ch.H_cR * v.segment(l * M_t, M_t);
          term.c.middleRows(l * M, M) = scale * (g_adj * d.asDiagonal());
        }
      }
    }
    forms.terms.push_back(std::move(term));
  }
  return forms;
}

namespace {

void check_forms(const BeamformerState& x, const PrecomputedForms& forms) {
  if (x.lm() != forms.lm || x.n() != forms.n) {
    throw DimensionError("forms built for (LM, N) = (" + std::to_string(forms.lm) + ", " +
                         std::to_string(forms.n) + "), state has (" + std::to_string(x.lm()) + ", " +
                         std::to_string(x.n()) + ")");
  }
}

}  // namespace

double objective(const BeamformerState& x, const PrecomputedForms& forms) {
  check_forms(x, forms);
  const ComplexVector w = x.w();
  const ComplexVector phi = x.phi();
  double f = 0.0;
  for (const FormTerm& t : forms.terms) {
    const Complex z = w.dot(t.b) + w.dot(t.c * phi);
    f += std::norm(z);
  }
  return f;
}

double objective_and_grad(const BeamformerState& x, const PrecomputedForms& forms, ComplexVector& grad) {
  check_forms(x, forms);
  const Index lm = x.lm();
  const ComplexVector w = x.w();
  const ComplexVector phi = x.phi();
  grad = ComplexVector::Zero(x.size());
  double f = 0.0;
  for (const FormTerm& t : forms.terms) {
    const ComplexVector channel = t.b + t.c * phi;  // b_i + C_i phi
    const Complex z = w.dot(channel);
    f += std::norm(z);
    grad.head(lm) += (2.0 * std::conj(z)) * channel;
    grad.tail(x.n()) += (2.0 * z) * (t.c.adjoint() * w);
  }
  return f;
}

ComplexVector euclid_grad(const BeamformerState& x, const PrecomputedForms& forms) {
  ComplexVector grad;
  objective_and_grad(x, forms, grad);
  return grad;
}

ComplexVector riem_grad(const BeamformerState& x, const ComplexVector& eg) {
  if (eg.size() != x.size()) throw DimensionError("riem_grad: gradient length mismatch");
  return transport(x, eg);
}

BeamformerState retract(const BeamformerState& x, const ComplexVector& step) {
  if (step.size() != x.size()) throw DimensionError("retract: step length mismatch");
  ComplexVector moved = x.x() + step;
  for (Index j = 0; j < moved.size(); ++j) {
    const double r = std::abs(moved(j));
    if (r == 0.0 || !std::isfinite(r)) throw DegenerateStepError("retract: x + step has a zero entry");
    moved(j) /= r;
  }
  return BeamformerState(std::move(moved), x.lm());
}

ComplexVector transport(const BeamformerState& x_new, const ComplexVector& c) {
  if (c.size() != x_new.size()) throw DimensionError("transport: vector length mismatch");
  const ComplexVector& x = x_new.x();
  ComplexVector out(c.size());
  for (Index j = 0; j < c.size(); ++j) {
    const double radial = (c(j) * std::conj(x(j))).real();
    out(j) = c(j) - radial * x(j);
  }
  return out;
}

double real_inner(const ComplexVector& a, const ComplexVector& b) { return a.dot(b).real(); }

LineSearchResult line_search(const BeamformerState& x, double f_x, const ComplexVector& grad,
                             const ComplexVector& direction, const PrecomputedForms& forms,
                             const RcgConfig& cfg) {
  LineSearchResult out;
  out.x_new = x;
  out.f_new = f_x;
  const double slope = real_inner(grad, direction);
  if (direction.squaredNorm() == 0.0 || !(slope < 0.0)) return out;

  double alpha = cfg.alpha_init;
  for (int k = 0; k <= cfg.max_shrinks; ++k, alpha *= cfg.armijo_shrink) {
    try {
      BeamformerState trial = retract(x, alpha * direction);
      const double f_trial = objective(trial, forms);
      if (f_trial <= f_x + cfg.armijo_c1 * alpha * slope) {
        out.alpha = alpha;
        out.f_new = f_trial;
        out.x_new = std::move(trial);
        out.shrinks = k;
        return out;
      }
    } catch (const DegenerateStepError&) {
      // shrink and retry
    }
  }
  return out;
}

double line_search(const BeamformerState& x, const ComplexVector& direction, const PrecomputedForms& forms,
                   const RcgConfig& cfg) {
  ComplexVector eg;
  const double f = objective_and_grad(x, forms, eg);
  ComplexVector g = riem_grad(x, eg);
  if (!cfg.optimize_phi) g.tail(x.n()).setZero();
  return line_search(x, f, g, direction, forms, cfg).alpha;
}

namespace {

ComplexVector full_riem_grad(const BeamformerState& x, const PrecomputedForms& forms, double& f) {
  ComplexVector eg;
  f = objective_and_grad(x, forms, eg);
  return riem_grad(x, eg);
}

// With phi frozen, b_i + C_i phi is a constant vector, so the problem lives
// on the w block alone.
PrecomputedForms fold_phase_block(const PrecomputedForms& forms, const ComplexVector& phi) {
  PrecomputedForms out;
  out.lm = forms.lm;
  out.n = 0;
  out.terms.reserve(forms.terms.size());
  for (const FormTerm& t : forms.terms) {
    FormTerm folded{t.b, ComplexMatrix::Zero(forms.lm, 0)};
    if (t.c.size() > 0 && !t.c.isZero(0.0)) folded.b += t.c * phi;
    out.terms.push_back(std::move(folded));
  }
  return out;
}

}  // namespace

RcgResult rcg_solve(const PrecomputedForms& forms, const BeamformerState& x0, const RcgConfig& cfg,
                    const RcgObserver& observer) {
  cfg.validate();
  check_forms(x0, forms);
  if (!cfg.optimize_phi && x0.n() > 0) {
    // The observer sees states of the reduced (w-only) problem.
    const ComplexVector phi = x0.phi();
    RcgConfig inner = cfg;
    inner.optimize_phi = true;
    RcgResult r = rcg_solve(fold_phase_block(forms, phi), BeamformerState(ComplexVector(x0.w()), x0.lm()),
                            inner, observer);
    r.x = BeamformerState::from_parts(r.x.w(), phi);
    return r;
  }
  const Index dim = x0.size();
  const double grad_tol = cfg.effective_grad_tol(dim);
  const int restart_period = cfg.effective_restart_period(dim);

  RcgResult result;
  BeamformerState x = x0;
  double f = 0.0;
  ComplexVector g = full_riem_grad(x, forms, f);
  ComplexVector c = -g;
  result.history.push_back(f);

  if (observer) {
    const ComplexVector none = ComplexVector::Zero(dim);
    observer(RcgIterate{0, &x, &g, &c, &none, f});
  }

  int since_restart = 0;
  while (result.iterations < cfg.max_iterations) {
    if (g.norm() <= grad_tol) {
      result.gradient_converged = true;
      break;
    }
    LineSearchResult step = line_search(x, f, g, c, forms, cfg);
    if (step.alpha == 0.0) {
      // Conjugate direction failed; fall back to steepest descent once.
      const bool was_steepest = (c + g).squaredNorm() <= 1e-30 * g.squaredNorm();
      if (was_steepest) break;
      c = -g;
      ++result.restarts;
      since_restart = 0;
      step = line_search(x, f, g, c, forms, cfg);
      if (step.alpha == 0.0) break;
    }

    const BeamformerState& x_new = step.x_new;
    double f_new = 0.0;
    ComplexVector g_new = full_riem_grad(x_new, forms, f_new);
    const ComplexVector g_plus = transport(x_new, g);
    const ComplexVector c_plus = transport(x_new, c);
    const double denom = g_plus.squaredNorm();
    const double beta = denom > 0.0 ? g_new.squaredNorm() / denom : 0.0;
    // Projecting again keeps long directions tangent to working precision.
    ComplexVector c_new = transport(x_new, -g_new + beta * c_plus);

    ++since_restart;
    if (since_restart >= restart_period || !(real_inner(g_new, c_new) < 0.0)) {
      c_new = -g_new;
      ++result.restarts;
      since_restart = 0;
    }

    x = x_new;
    f = f_new;
    g = std::move(g_new);
    c = std::move(c_new);
    ++result.iterations;
    result.history.push_back(f);
    if (observer) observer(RcgIterate{result.iterations, &x, &g, &c, &c_plus, f});
  }
  result.x = std::move(x);
  result.final_grad_norm = g.norm();
  if (!result.gradient_converged && result.final_grad_norm <= grad_tol) result.gradient_converged = true;
  return result;
}

}  // namespace risisac
