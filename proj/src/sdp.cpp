// SPDX-License-Identifier: Apache-2.0
#include "risisac/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace risisac {

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::infeasible:
      return "infeasible";
    case SdpStatus::max_iters:
      return "max_iters";
  }
  return "unknown";
}

bool TransmitCovariance::satisfies_invariants() const {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) return false;
  if (!matrix.allFinite()) return false;
  const double scale = std::max(matrix.norm(), 1e-300);
  if ((matrix - matrix.adjoint()).norm() > 1e-10 * scale) return false;
  const double tr = matrix.trace().real();
  if (std::abs(tr - trace) > 1e-6 * std::abs(trace)) return false;
  const EvdResult evd = hermitian_evd(matrix);
  return evd.eigenvalues(evd.eigenvalues.size() - 1) >= -1e-8 * std::abs(trace);
}

double trace_product(const ComplexMatrix& m, const ComplexMatrix& r) {
  return (m.array() * r.transpose().array()).sum().real();
}

void SdpProblem::validate() const {
  if (dim < 1) throw DimensionError("SdpProblem: dim must be >= 1");
  for (const ComplexMatrix* m : {&obj, &comm_mat, &sense_mat}) {
    if (m->rows() != dim || m->cols() != dim) throw DimensionError("SdpProblem: coefficient matrix shape");
    require_hermitian(*m, "SdpProblem", 1e-10);
  }
  if (!(trace_budget > 0.0)) throw DomainError("SdpProblem: trace budget must be positive");
}

double SdpProblem::objective_at(const ComplexMatrix& R) const { return trace_product(obj, R); }
double SdpProblem::comm_value(const ComplexMatrix& R) const { return trace_product(comm_mat, R); }
double SdpProblem::sense_value(const ComplexMatrix& R) const { return trace_product(sense_mat, R); }

ComplexMatrix beamformed_gram(const ComplexMatrix& block, const ComplexVector& w, Index L) {
  const ComplexVector u = kron_identity_adjoint_apply(block, w, L);
  return u * u.adjoint();
}

SdpProblem assemble_p2(const ComplexVector& w, const ComplexVector& phi, const ChannelSet& ch,
                       const EffectiveChannels& eff, const ScenarioConfig& cfg) {
  require_unit_modulus(w, "assemble_p2 (w)");
  require_unit_modulus(phi, "assemble_p2 (phi)");
  const Index L = cfg.L, M_t = ch.M_t(), M = ch.M();
  if (w.size() != L * M || phi.size() != ch.N() || eff.Ac_block.rows() != M || eff.Ac_block.cols() != M_t) {
    throw DimensionError("assemble_p2: dimensions do not match the scenario");
  }
  const Index dim = L * M_t;
  const double gamma_s = cfg.gamma_sense();

  SdpProblem p;
  p.dim = dim;
  p.trace_budget = cfg.P_B();
  p.obj = beamformed_gram(eff.Ac_block, w, L);

  const ComplexMatrix comm_gram = eff.Hc_block.adjoint() * eff.Hc_block;
  p.comm_mat = ComplexMatrix::Zero(dim, dim);
  for (Index l = 0; l < L; ++l) p.comm_mat.block(l * M_t, l * M_t, M_t, M_t) = comm_gram;
  p.comm_rhs = cfg.gamma_comm() * cfg.M_r * L * cfg.sigma_c2();

  p.sense_mat = beamformed_gram(eff.Ar_block, w, L);
  if (gamma_s != 0.0) {
    p.sense_mat -= gamma_s * p.obj;
    if (eff.Ao_block.squaredNorm() > 0.0) p.sense_mat -= gamma_s * beamformed_gram(eff.Ao_block, w, L);
  }
  p.sense_mat = hermitian_part(p.sense_mat);
  p.sense_rhs = gamma_s * cfg.sigma_r2() * static_cast<double>(w.size());
  return p;
}

namespace {

struct Constraint {
  ComplexMatrix a;  // normalised, trace-one variable
  double b = 0.0;
  bool is_comm = true;
};

double lambda_min(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

struct TopEigen {
  double value;
  ComplexVector vector;
};

TopEigen lambda_max(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  const Index n = m.rows();
  return {es.eigenvalues()(n - 1), es.eigenvectors().col(n - 1)};
}

// max over trace-one PSD X of min_k (tr(A_k X) - b_k), by minimising the
// convex dual function over the simplex of constraint weights.
struct FeasibilityCheck {
  double margin;
  ComplexVector witness;  // rank-one maximiser direction
};

FeasibilityCheck feasibility_margin(const std::vector<Constraint>& cons, Index dim) {
  if (cons.empty()) return {std::numeric_limits<double>::infinity(), ComplexVector::Zero(dim)};
  auto value = [&](double theta) {
    if (cons.size() == 1) {
      TopEigen top = lambda_max(cons[0].a);
      return std::pair{top.value - cons[0].b, top.vector};
    }
    TopEigen top = lambda_max(theta * cons[0].a + (1.0 - theta) * cons[1].a);
    return std::pair{top.value - theta * cons[0].b - (1.0 - theta) * cons[1].b, top.vector};
  };
  if (cons.size() == 1) {
    auto [v, vec] = value(1.0);
    return {v, vec};
  }
  // golden-section search on a convex function of theta in [0, 1]
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = value(x1).first, f2 = value(x2).first;
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = value(x1).first;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = value(x2).first;
    }
  }
  double best_theta = 0.5 * (lo + hi);
  auto best = value(best_theta);
  for (double edge : {0.0, 1.0}) {
    auto candidate = value(edge);
    if (candidate.first < best.first) best = candidate;
  }
  return {best.first, best.second};
}

// Barrier state on the dual variables y = (y0, y_1..y_m).
struct DualPoint {
  Eigen::VectorXd y;
  ComplexMatrix z;
  Eigen::LLT<ComplexMatrix> llt;
  bool ok = false;
};

class DualBarrier {
 public:
  DualBarrier(const ComplexMatrix& c, const std::vector<Constraint>& cons) : c_(c), cons_(cons) {}

  DualPoint evaluate(const Eigen::VectorXd& y) const {
    DualPoint p;
    p.y = y;
    for (std::size_t k = 0; k < cons_.size(); ++k) {
      if (!(y(k + 1) > 0.0)) return p;
    }
    p.z = c_;
    p.z.diagonal().array() -= y(0);
    for (std::size_t k = 0; k < cons_.size(); ++k) p.z -= y(k + 1) * cons_[k].a;
    p.llt.compute(p.z);
    if (p.llt.info() != Eigen::Success) return p;
    const auto& lower = p.llt.matrixLLT();
    for (Index i = 0; i < lower.rows(); ++i) {
      if (!(lower(i, i).real() > 0.0) || !std::isfinite(lower(i, i).real())) return p;
    }
    p.ok = true;
    return p;
  }

  double value(const DualPoint& p, double t) const {
    double linear = p.y(0);
    for (std::size_t k = 0; k < cons_.size(); ++k) linear += cons_[k].b * p.y(k + 1);
    double logdet = 0.0;
    const auto& lower = p.llt.matrixLLT();
    for (Index i = 0; i < lower.rows(); ++i) logdet += 2.0 * std::log(lower(i, i).real());
    double logs = 0.0;
    for (std::size_t k = 0; k < cons_.size(); ++k) logs += std::log(p.y(k + 1));
    return t * linear + logdet + logs;
  }

  // gradient and Hessian of the (concave) barrier objective
  void derivatives(const DualPoint& p, double t, Eigen::VectorXd& grad, Eigen::MatrixXd& hess,
                   ComplexMatrix& z_inv) const {
    const Index n = c_.rows();
    const std::size_t m = cons_.size();
    z_inv = p.llt.solve(ComplexMatrix::Identity(n, n));
    z_inv = hermitian_part(z_inv);
    std::vector<ComplexMatrix> products;
    products.reserve(m + 1);
    products.push_back(z_inv);
    for (const Constraint& con : cons_) products.push_back(z_inv * con.a);

    grad.resize(static_cast<Index>(m + 1));
    hess.resize(static_cast<Index>(m + 1), static_cast<Index>(m + 1));
    grad(0) = t - z_inv.trace().real();
    for (std::size_t k = 0; k < m; ++k) {
      grad(k + 1) = t * cons_[k].b - products[k + 1].trace().real() + 1.0 / p.y(k + 1);
    }
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = i; j <= m; ++j) {
        const double h = -(products[i].array() * products[j].transpose().array()).sum().real();
        hess(i, j) = h;
        hess(j, i) = h;
      }
    }
    for (std::size_t k = 0; k < m; ++k) hess(k + 1, k + 1) -= 1.0 / (p.y(k + 1) * p.y(k + 1));
  }

 private:
  const ComplexMatrix& c_;
  const std::vector<Constraint>& cons_;
};

void finalise_violation(const SdpProblem& p, SdpSolution& s) {
  const ComplexMatrix& R = s.R_ss.matrix;
  double worst = 0.0;
  const double comm_scale = std::max({std::abs(p.comm_rhs), p.comm_mat.norm() * p.trace_budget, 1e-300});
  const double sense_scale = std::max({std::abs(p.sense_rhs), p.sense_mat.norm() * p.trace_budget, 1e-300});
  worst = std::max(worst, (p.comm_rhs - p.comm_value(R)) / comm_scale);
  worst = std::max(worst, (p.sense_rhs - p.sense_value(R)) / sense_scale);
  s.max_violation = std::max(worst, 0.0);
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, double tol, int max_iters) {
  p.validate();
  if (!(tol > 0.0)) throw DomainError("solve_sdp: tol must be positive");
  const Index n = p.dim;
  const double budget = p.trace_budget;

  SdpSolution sol;
  sol.R_ss.trace = budget;

  // Normalise: X = R / P_B has unit trace; every matrix gets unit scale.
  const double obj_scale = p.obj.norm() > 0.0 ? p.obj.norm() : 1.0;
  const ComplexMatrix c = hermitian_part(p.obj) / obj_scale;

  std::vector<Constraint> cons;
  bool trivially_infeasible = false;
  auto add_constraint = [&](const ComplexMatrix& a, double rhs, bool is_comm) {
    const double scale = std::max(a.norm(), std::abs(rhs) / budget);
    if (scale == 0.0) return;  // 0 >= 0
    Constraint con{hermitian_part(a) / scale, rhs / (budget * scale), is_comm};
    if (con.a.norm() == 0.0) {
      if (con.b > 0.0) trivially_infeasible = true;
      return;
    }
    // implied by tr(X) = 1, X PSD
    if (lambda_min(con.a) >= con.b) return;
    cons.push_back(std::move(con));
  };
  add_constraint(p.comm_mat, p.comm_rhs, true);
  add_constraint(p.sense_mat, p.sense_rhs, false);

  auto set_point = [&](const ComplexMatrix& x_unit) {
    ComplexMatrix r = hermitian_part(x_unit);
    const double tr = r.trace().real();
    if (tr > 0.0) r *= budget / tr;
    sol.R_ss.matrix = r;
    sol.objective_value = p.objective_at(r);
  };

  const FeasibilityCheck feas = feasibility_margin(cons, n);
  if (trivially_infeasible || feas.margin < -1e-10) {
    set_point(feas.witness.size() == n && feas.witness.norm() > 0.0
                  ? ComplexMatrix(feas.witness * feas.witness.adjoint())
                  : ComplexMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n)));
    sol.status = SdpStatus::infeasible;
    finalise_violation(p, sol);
    sol.max_violation = std::max(sol.max_violation, trivially_infeasible ? 1.0 : -feas.margin);
    sol.kkt_residual = sol.max_violation;
    return sol;
  }

  if (n == 1) {
    // the trace equality pins the scalar
    set_point(ComplexMatrix::Identity(1, 1));
    sol.status = SdpStatus::optimal;
    sol.kkt_residual = 0.0;
    finalise_violation(p, sol);
    return sol;
  }

  const std::size_t m = cons.size();
  const double barrier_weight = static_cast<double>(n + static_cast<Index>(m));
  DualBarrier barrier(c, cons);

  Eigen::VectorXd y = Eigen::VectorXd::Ones(static_cast<Index>(m + 1));
  {
    ComplexMatrix shifted = c;
    for (const Constraint& con : cons) shifted -= con.a;
    y(0) = lambda_min(shifted) - 1.0;
  }
  DualPoint point = barrier.evaluate(y);
  if (!point.ok) throw std::runtime_error("solve_sdp: could not build a strictly dual-feasible start");

  double t = barrier_weight;  // gap starts near one in normalised units
  const double mu = 10.0;
  int newton_steps = 0;
  bool converged = false;
  ComplexMatrix z_inv;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double centring_residual = std::numeric_limits<double>::infinity();

  while (newton_steps < max_iters) {
    // centre for the current t
    for (int inner = 0; inner < 200 && newton_steps < max_iters; ++inner) {
      barrier.derivatives(point, t, grad, hess, z_inv);
      const Eigen::VectorXd step = (-hess).ldlt().solve(grad);
      const double decrement2 = grad.dot(step);
      centring_residual = std::sqrt(std::max(decrement2, 0.0));
      if (!(decrement2 > 1e-20) || !step.allFinite()) break;
      ++newton_steps;

      double s = 1.0;
      const double f0 = barrier.value(point, t);
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt, s *= 0.5) {
        DualPoint trial = barrier.evaluate(point.y + s * step);
        if (!trial.ok) continue;
        // inside the quadratic-convergence region take the feasible step directly
        if (decrement2 < 0.1 || barrier.value(trial, t) >= f0 + 0.25 * s * decrement2) {
          point = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      if (decrement2 < 1e-14) break;
    }
    barrier.derivatives(point, t, grad, hess, z_inv);
    if (barrier_weight / t <= 0.5 * tol && centring_residual < 1e-5) {
      converged = true;
      break;
    }
    t *= mu;
  }

  // primal point from the central path
  const ComplexMatrix x_unit = hermitian_part(z_inv / t);
  set_point(x_unit);
  const ComplexMatrix& X = x_unit;

  // KKT residuals in normalised units
  const double trace_err = std::abs(X.trace().real() - 1.0);
  double gap = trace_product(point.z, X);
  double primal_violation = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double slack = trace_product(cons[k].a, X) - cons[k].b;
    gap += point.y(static_cast<Index>(k + 1)) * std::max(slack, 0.0);
    primal_violation = std::max(primal_violation, -slack);
  }
  sol.kkt_residual = std::max({std::abs(gap), trace_err, primal_violation});
  sol.iterations = newton_steps;
  sol.status = (converged && sol.kkt_residual <= tol) ? SdpStatus::optimal : SdpStatus::max_iters;
  finalise_violation(p, sol);
  return sol;
}

}  // namespace risisac
