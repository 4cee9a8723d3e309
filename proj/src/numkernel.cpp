// SPDX-License-Identifier: Apache-2.0
#include "risisac/numkernel.hpp"

#include <algorithm>
#include <string>

namespace risisac {

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

void require_hermitian(const ComplexMatrix& a, const char* what, double rel_tol) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
  if (!is_hermitian(a, rel_tol)) throw SymmetryError(std::string(what) + ": matrix is not Hermitian");
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

EvdResult hermitian_evd(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_evd");
  const Index n = a.rows();
  EvdResult out;
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_evd: eigensolver failed");

  // Eigen sorts ascending; flip to descending.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ComplexMatrix psd_project(const ComplexMatrix& a) {
  require_hermitian(a, "psd_project");
  if (a.rows() == 0) return a;
  const EvdResult evd = hermitian_evd(a);
  const RealVector clamped = evd.eigenvalues.cwiseMax(0.0);
  ComplexMatrix out = evd.eigenvectors * clamped.cast<Complex>().asDiagonal() * evd.eigenvectors.adjoint();
  return hermitian_part(out);
}

RealVector guarded_sqrt_eigenvalues(const RealVector& eigenvalues) {
  RealVector out = RealVector::Zero(eigenvalues.size());
  if (eigenvalues.size() == 0) return out;
  const double largest = eigenvalues.cwiseAbs().maxCoeff();
  const double floor = 1e-12 * largest;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    if (lambda > floor) out(i) = std::sqrt(lambda);
  }
  return out;
}

ComplexVector kron_identity_apply(const ComplexMatrix& h, const ComplexVector& v, Index blocks) {
  if (blocks < 1 || v.size() != blocks * h.cols()) {
    throw DimensionError("kron_identity_apply: vector length " + std::to_string(v.size()) +
                         " is not L*cols = " + std::to_string(blocks) + "*" + std::to_string(h.cols()));
  }
  ComplexVector out(blocks * h.rows());
  for (Index l = 0; l < blocks; ++l) {
    out.segment(l * h.rows(), h.rows()).noalias() = h * v.segment(l * h.cols(), h.cols());
  }
  return out;
}

ComplexVector kron_identity_adjoint_apply(const ComplexMatrix& h, const ComplexVector& w,
                                          Index blocks) {
  if (blocks < 1 || w.size() != blocks * h.rows()) {
    throw DimensionError("kron_identity_adjoint_apply: vector length " + std::to_string(w.size()) +
                         " is not L*rows = " + std::to_string(blocks) + "*" + std::to_string(h.rows()));
  }
  ComplexVector out(blocks * h.cols());
  for (Index l = 0; l < blocks; ++l) {
    out.segment(l * h.cols(), h.cols()).noalias() = h.adjoint() * w.segment(l * h.rows(), h.rows());
  }
  return out;
}

}  // namespace risisac
