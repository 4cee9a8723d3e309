// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "risisac/numkernel.hpp"
#include "risisac/random.hpp"
#include "risisac/scenario.hpp"

namespace risisac {

/// Stacked unit-modulus variable x = [w; phi] on the product of circles.
class BeamformerState {
 public:
  BeamformerState() = default;
  /// `x` must be unit modulus within 1e-9; entries are renormalised exactly.
  BeamformerState(ComplexVector x, Index lm);

  static BeamformerState from_parts(const ComplexVector& w, const ComplexVector& phi);
  /// i.i.d. uniform phases; w is drawn before phi so w does not depend on N.
  static BeamformerState random(Index lm, Index n, RandomStream& rng);

  const ComplexVector& x() const { return x_; }
  auto w() const { return x_.head(lm_); }
  auto phi() const { return x_.tail(x_.size() - lm_); }
  Index lm() const { return lm_; }
  Index n() const { return x_.size() - lm_; }
  Index size() const { return x_.size(); }

  /// max_j ||x_j| - 1|
  double modulus_error() const;

 private:
  ComplexVector x_;
  Index lm_ = 0;
};

/// One eigen-term of the reduced interference objective:
/// |w^H b + w^H C phi|^2 with b of length LM and C of shape LM x N.
struct FormTerm {
  ComplexVector b;
  ComplexMatrix c;
};

struct PrecomputedForms {
  Index lm = 0;
  Index n = 0;
  std::vector<FormTerm> terms;  // one per eigenpair of R_ss

  /// Copy with every b, C multiplied by `factor` (objective scales by factor^2).
  PrecomputedForms scaled(double factor) const;
};

struct RcgConfig {
  int max_iterations = 5000;  // I
  double armijo_c1 = 1e-4;
  double armijo_shrink = 0.5;
  double alpha_init = 1.0;
  int max_shrinks = 50;
  double grad_tol = -1.0;   // negative: 1e-8 * (LM + N)
  int restart_period = 0;   // 0: LM + N
  bool optimize_phi = true;  // false freezes the RIS block (benchmarks)

  void validate() const;
  double effective_grad_tol(Index dim) const;
  int effective_restart_period(Index dim) const;
};

/// Build {b_i, C_i} from the eigenpairs of R_ss. Eigenvalues under the
/// round-off floor contribute zero terms; the list always has L*M_t entries.
PrecomputedForms precompute_forms(const EvdResult& rss_evd, const ChannelSet& ch, Index L);

/// sum_i |w^H b_i + w^H C_i phi|^2
double objective(const BeamformerState& x, const PrecomputedForms& forms);

/// Euclidean gradient, i.e. twice the conjugate Wirtinger derivative; the
/// directional derivative along delta is Re<grad, delta>.
ComplexVector euclid_grad(const BeamformerState& x, const PrecomputedForms& forms);

/// Objective and Euclidean gradient in one pass.
double objective_and_grad(const BeamformerState& x, const PrecomputedForms& forms, ComplexVector& grad);

/// Tangent-space projection eg - Re(eg .* conj(x)) .* x.
ComplexVector riem_grad(const BeamformerState& x, const ComplexVector& eg);

/// Entrywise (x + step) / |x + step|. Throws DegenerateStepError on a zero entry.
BeamformerState retract(const BeamformerState& x, const ComplexVector& step);

/// Projection of c onto the tangent space at x_new.
ComplexVector transport(const BeamformerState& x_new, const ComplexVector& c);

/// Real inner product Re(a^H b).
double real_inner(const ComplexVector& a, const ComplexVector& b);

struct LineSearchResult {
  double alpha = 0.0;
  double f_new = 0.0;
  BeamformerState x_new;
  int shrinks = 0;
};

/// Armijo backtracking from alpha_init. alpha = 0 means no admissible step
/// (also returned for a non-descent or zero direction).
LineSearchResult line_search(const BeamformerState& x, double f_x, const ComplexVector& grad,
                             const ComplexVector& direction, const PrecomputedForms& forms,
                             const RcgConfig& cfg);

double line_search(const BeamformerState& x, const ComplexVector& direction, const PrecomputedForms& forms,
                   const RcgConfig& cfg);

/// Snapshot passed to the observer after every accepted iteration.
struct RcgIterate {
  int iteration = 0;
  const BeamformerState* x = nullptr;
  const ComplexVector* grad = nullptr;        // Riemannian gradient at x
  const ComplexVector* direction = nullptr;   // next search direction at x
  const ComplexVector* transported = nullptr; // previous direction moved to x
  double f = 0.0;
};

struct RcgResult {
  BeamformerState x;
  std::vector<double> history;  // f(x0), f(x1), ...
  int iterations = 0;
  int restarts = 0;
  double final_grad_norm = 0.0;
  bool gradient_converged = false;
};

using RcgObserver = std::function<void(const RcgIterate&)>;

RcgResult rcg_solve(const PrecomputedForms& forms, const BeamformerState& x0, const RcgConfig& cfg,
                    const RcgObserver& observer = {});

}  // namespace risisac
