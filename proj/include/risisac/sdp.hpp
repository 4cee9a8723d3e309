// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "risisac/numkernel.hpp"
#include "risisac/scenario.hpp"
#include "risisac/sysmodel.hpp"

namespace risisac {

/// Hermitian PSD transmit covariance with tr(R) = P_B.
struct TransmitCovariance {
  ComplexMatrix matrix;
  double trace = 0.0;  // the budget P_B the matrix was built for

  /// Checks Hermitian (1e-10), PSD (-1e-8 P_B) and trace (1e-6 relative).
  bool satisfies_invariants() const;
};

/// min tr(Obj R)
/// s.t. tr(CommMat R) >= comm_rhs, tr(SenseMat R) >= sense_rhs,
///      tr(R) = trace_budget, R PSD.
struct SdpProblem {
  Index dim = 0;
  ComplexMatrix obj;
  ComplexMatrix comm_mat;
  double comm_rhs = 0.0;
  ComplexMatrix sense_mat;
  double sense_rhs = 0.0;
  double trace_budget = 1.0;

  void validate() const;
  double objective_at(const ComplexMatrix& R) const;
  double comm_value(const ComplexMatrix& R) const;   // tr(CommMat R)
  double sense_value(const ComplexMatrix& R) const;  // tr(SenseMat R)
};

enum class SdpStatus { optimal, infeasible, max_iters };
std::string to_string(SdpStatus status);

struct SdpSolution {
  TransmitCovariance R_ss;
  double objective_value = 0.0;
  double kkt_residual = 0.0;
  SdpStatus status = SdpStatus::max_iters;
  /// Worst normalised constraint shortfall of the returned point (0 when feasible).
  double max_violation = 0.0;
  int iterations = 0;
};

/// tr(M R) for Hermitian M, R (real part).
double trace_product(const ComplexMatrix& m, const ComplexMatrix& r);

/// Gram matrix u u^H with u = (I_L (x) B)^H w: tr(Gram R) is the receive
/// power of block B under beamformer w and covariance R.
ComplexMatrix beamformed_gram(const ComplexMatrix& block, const ComplexVector& w, Index L);

/// Covariance subproblem for fixed (w, phi).
SdpProblem assemble_p2(const ComplexVector& w, const ComplexVector& phi, const ChannelSet& ch,
                       const EffectiveChannels& eff, const ScenarioConfig& cfg);

/// Log-barrier interior-point method on the (at most) three-variable dual.
/// Central-path points Z^{-1}/t are strictly primal feasible, so every
/// iterate respects the trace equality and both inequalities.
SdpSolution solve_sdp(const SdpProblem& p, double tol = 1e-7, int max_iters = 50000);

}  // namespace risisac
