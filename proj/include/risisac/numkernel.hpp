// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>

#include "risisac/errors.hpp"

namespace risisac {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
struct EvdResult {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // column i pairs with eigenvalues(i)
};

/// True when ||A - A^H||_F <= rel_tol * ||A||_F (square matrices only).
bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-8);

/// Throws DimensionError/SymmetryError unless `a` is square and Hermitian.
void require_hermitian(const ComplexMatrix& a, const char* what, double rel_tol = 1e-8);

EvdResult hermitian_evd(const ComplexMatrix& a);

/// Frobenius-nearest PSD matrix: V max(Lambda, 0) V^H.
ComplexMatrix psd_project(const ComplexMatrix& a);

/// Square roots of the eigenvalues with the round-off guard applied:
/// values with |lambda| < 1e-12 * max|lambda| (or negative) map to zero.
RealVector guarded_sqrt_eigenvalues(const RealVector& eigenvalues);

/// (I_L (x) H) v without forming the Kronecker product. `v` holds `blocks`
/// consecutive segments of length H.cols().
ComplexVector kron_identity_apply(const ComplexMatrix& h, const ComplexVector& v, Index blocks);

/// (I_L (x) H)^H w, i.e. the stack of H^H w^(l) over the L segments of w.
ComplexVector kron_identity_adjoint_apply(const ComplexMatrix& h, const ComplexVector& w,
                                          Index blocks);

ComplexMatrix hermitian_part(const ComplexMatrix& a);

}  // namespace risisac
