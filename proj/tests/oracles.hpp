// SPDX-License-Identifier: Apache-2.0
// Dense reference computations used only by the tests. Everything here
// materialises the full operators with plain loops so that it shares no code
// path with the blockwise production kernels.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "risisac/numkernel.hpp"
#include "risisac/random.hpp"
#include "risisac/scenario.hpp"

namespace oracle {

using risisac::Complex;
using risisac::ComplexMatrix;
using risisac::ComplexVector;
using risisac::Index;

inline ComplexMatrix dense_kron_identity(const ComplexMatrix& h, Index L) {
  ComplexMatrix out = ComplexMatrix::Zero(L * h.rows(), L * h.cols());
  for (Index l = 0; l < L; ++l) {
    for (Index i = 0; i < h.rows(); ++i) {
      for (Index j = 0; j < h.cols(); ++j) out(l * h.rows() + i, l * h.cols() + j) = h(i, j);
    }
  }
  return out;
}

inline ComplexMatrix dense_diag(const ComplexVector& v) {
  ComplexMatrix d = ComplexMatrix::Zero(v.size(), v.size());
  for (Index i = 0; i < v.size(); ++i) d(i, i) = v(i);
  return d;
}

inline ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      Complex s{0.0, 0.0};
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

/// w^H K R K^H w with K = I_L (x) block, all dense.
inline double dense_power(const ComplexMatrix& block, const ComplexVector& w, const ComplexMatrix& R, Index L) {
  const ComplexMatrix k = dense_kron_identity(block, L);
  const ComplexMatrix wm = w;  // column
  const ComplexMatrix q = naive_product(naive_product(naive_product(adjoint(wm), k), R), naive_product(adjoint(k), wm));
  return q(0, 0).real();
}

inline ComplexMatrix oracle_pi_channel(const risisac::ChannelSet& ch, const ComplexVector& phi) {
  return ch.gains.dpi * ch.H_DPI +
         ch.gains.rpi * naive_product(naive_product(adjoint(ch.G_rR), dense_diag(phi)), ch.H_cR);
}

inline ComplexMatrix oracle_comm_channel(const risisac::ChannelSet& ch, const ComplexVector& phi) {
  return ch.gains.c_d * ch.H_k + ch.gains.c_r * naive_product(naive_product(ch.H_Rk, dense_diag(phi)), ch.H_cR);
}

inline ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) {
  ComplexMatrix out(a.size(), b.size());
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) out(i, j) = a(i) * std::conj(b(j));
  }
  return out;
}

inline ComplexMatrix oracle_sensing_channel(const risisac::ChannelSet& ch, const ComplexVector& phi) {
  const ComplexMatrix d = dense_diag(phi);
  const ComplexMatrix g_adj = adjoint(ch.G_rR);
  const ComplexMatrix p1 = ch.gains.s1 * outer(ch.g_t, ch.h_t);
  const ComplexMatrix p2 = ch.gains.s2 * naive_product(naive_product(g_adj, d), outer(ch.g_Rt, ch.h_t));
  const ComplexMatrix p3 = ch.gains.s3 * naive_product(naive_product(outer(ch.g_t, ch.g_Rt), d), ch.H_cR);
  const ComplexMatrix p4 = ch.gains.s4 * naive_product(naive_product(naive_product(naive_product(g_adj, d),
                                                                                    outer(ch.g_Rt, ch.g_Rt)),
                                                                     d),
                                                       ch.H_cR);
  return p1 + p2 + p3 + p4;
}

/// f(x) = sum_i |w^H b_i + w^H C_i phi|^2 for an arbitrary (not necessarily
/// unit-modulus) stacked vector x = [w; phi].
inline double form_objective(const std::vector<ComplexVector>& b, const std::vector<ComplexMatrix>& c,
                             const ComplexVector& x, Index lm) {
  double f = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Complex z{0.0, 0.0};
    for (Index r = 0; r < lm; ++r) {
      Complex row = b[i](r);
      for (Index n = 0; n < c[i].cols(); ++n) row += c[i](r, n) * x(lm + n);
      z += std::conj(x(r)) * row;
    }
    f += std::norm(z);
  }
  return f;
}

/// Directional derivative of a real function of a complex vector along
/// delta, by a fourth-order central difference in the real step size.
template <class F>
double directional_fd(const F& f, const ComplexVector& x, const ComplexVector& delta, double h) {
  return (-f(x + 2 * h * delta) + 8 * f(x + h * delta) - 8 * f(x - h * delta) + f(x - 2 * h * delta)) / (12 * h);
}

inline ComplexMatrix random_hermitian(Index n, risisac::RandomStream& rng) {
  const ComplexMatrix g = rng.complex_normal_matrix(n, n);
  return 0.5 * (g + adjoint(g));
}

inline ComplexMatrix random_psd(Index n, risisac::RandomStream& rng) {
  const ComplexMatrix g = rng.complex_normal_matrix(n, n);
  return naive_product(adjoint(g), g);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  }
  return worst;
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) / scale;
}

/// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.
inline std::pair<double, double> eig2(const ComplexMatrix& a) {
  const double p = a(0, 0).real(), q = a(1, 1).real();
  const double rad = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(a(0, 1)));
  return {0.5 * (p + q) - rad, 0.5 * (p + q) + rad};
}

/// 2x2 density-matrix grid: X(theta, psi, s) = s v v^H + (1 - s) u u^H with
/// v = (cos theta/2, e^{j psi} sin theta/2) and u its orthogonal complement.
/// Every trace-one PSD 2x2 matrix is of this form.
inline ComplexMatrix bloch_point(double theta, double psi, double s) {
  ComplexVector v(2), u(2);
  v << std::cos(theta / 2), std::polar(std::sin(theta / 2), psi);
  u << -std::conj(v(1)), std::conj(v(0));
  return s * outer(v, v) + (1.0 - s) * outer(u, u);
}

}  // namespace oracle
