// SPDX-License-Identifier: Apache-2.0
// Brute-force reference for 2x2 covariance problems and random instance
// generators shared by the unit and acceptance suites.
#pragma once

#include <random>

#include "oracles.hpp"
#include "risisac/sdp.hpp"

namespace oracle {

struct GridOptimum {
  double value = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

inline bool grid_feasible(const risisac::SdpProblem& p, const ComplexMatrix& r) {
  return p.comm_value(r) >= p.comm_rhs && p.sense_value(r) >= p.sense_rhs;
}

/// Grid search over trace-P_B PSD 2x2 matrices (eigenbasis angles and
/// eigenvalue split), about 10^6 points, followed by local zooming.
inline GridOptimum grid_search_2x2(const risisac::SdpProblem& p) {
  const double budget = p.trace_budget;
  GridOptimum best;
  double bt = 0, bp = 0, bs = 0;
  const int nt = 100, np = 100, ns = 100;
  for (int it = 0; it <= nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      for (int is = 0; is <= ns; ++is) {
        const double t = risisac::kPi * it / nt, ps = 2 * risisac::kPi * ip / np, s = 0.5 + 0.5 * is / ns;
        const ComplexMatrix r = budget * bloch_point(t, ps, s);
        if (!grid_feasible(p, r)) continue;
        const double f = p.objective_at(r);
        if (f < best.value) best = {f, true}, bt = t, bp = ps, bs = s;
      }
    }
  }
  if (!best.feasible) return best;
  // Random stencils around the incumbent: a fixed lattice stalls where the
  // feasible descent cone is a thin wedge along an active constraint.
  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  double dt = risisac::kPi / nt, dp = 2 * risisac::kPi / np, ds = 0.5 / ns;
  for (int round = 0; round < 3000 && dt > 1e-12; ++round) {
    const double ct = bt, cp = bp, cs = bs, before = best.value;
    for (int k = 0; k < 1500; ++k) {
      const double t = ct + dt * unit(gen), ps = cp + dp * unit(gen);
      const double s = std::clamp(cs + ds * unit(gen), 0.5, 1.0);
      const ComplexMatrix r = budget * bloch_point(t, ps, s);
      if (!grid_feasible(p, r)) continue;
      const double f = p.objective_at(r);
      if (f < best.value) best.value = f, bt = t, bp = ps, bs = s;
    }
    if (!(best.value < before - 1e-13 * std::abs(before))) dt *= 0.7, dp *= 0.7, ds *= 0.7;
  }
  return best;
}

/// Exact optimum for dim 2. With R = (P/2)(I + a.sigma) and |a| <= 1 every
/// trace term is affine in the Bloch vector a, so the problem is a linear
/// objective over the unit ball cut by two half-spaces. The minimiser lies on
/// the sphere: at -c/|c|, on a plane-sphere circle, or at a two-plane corner.
inline GridOptimum bloch_ball_optimum(const risisac::SdpProblem& p) {
  using V3 = Eigen::Vector3d;
  const double P = p.trace_budget;
  // tr(M R) = (P/2) (tr M + m . a)
  auto coeffs = [&](const ComplexMatrix& m, double& offset) {
    offset = 0.5 * P * (m(0, 0).real() + m(1, 1).real());
    return V3(P * m(0, 1).real(), -P * m(0, 1).imag(), 0.5 * P * (m(0, 0).real() - m(1, 1).real()));
  };
  double c0 = 0, o1 = 0, o2 = 0;
  const V3 c = coeffs(p.obj, c0);
  const V3 n1 = coeffs(p.comm_mat, o1), n2 = coeffs(p.sense_mat, o2);
  const double d1 = p.comm_rhs - o1, d2 = p.sense_rhs - o2;  // n_i . a >= d_i
  std::vector<V3> cands;
  if (c.norm() > 0) cands.push_back(-c / c.norm());
  for (const auto& [n, d] : {std::pair{n1, d1}, std::pair{n2, d2}}) {
    const double nn = n.squaredNorm();
    if (nn == 0 || d * d > nn) continue;
    const V3 centre = d / nn * n;
    const double r = std::sqrt(std::max(0.0, 1 - d * d / nn));
    const V3 cp = c - c.dot(n) / nn * n;
    if (cp.norm() > 0) cands.push_back(centre - r * cp / cp.norm());
  }
  const V3 dir = n1.cross(n2);
  if (dir.norm() > 0) {
    // point on both planes closest to the origin, then walk along dir
    Eigen::Matrix<double, 2, 3> a;
    a.row(0) = n1;
    a.row(1) = n2;
    const V3 base = a.transpose() * (a * a.transpose()).ldlt().solve(Eigen::Vector2d(d1, d2));
    const V3 u = dir.normalized();
    const double bb = base.dot(u), disc = bb * bb - (base.squaredNorm() - 1);
    if (disc >= 0) {
      for (double sgn : {-1.0, 1.0}) cands.push_back(base + (-bb + sgn * std::sqrt(disc)) * u);
    }
  }
  GridOptimum best;
  for (const V3& a : cands) {
    const double slack = 1e-11 * (1 + std::abs(d1) + std::abs(d2) + n1.norm() + n2.norm());
    if (a.norm() > 1 + 1e-12 || n1.dot(a) < d1 - slack || n2.dot(a) < d2 - slack) continue;
    const double f = c0 + c.dot(a);
    if (f < best.value) best = {f, true};
  }
  return best;
}

/// Random instance with a PSD objective, a comm-style PSD constraint and an
/// indefinite sensing-style constraint; `tight` moves the right-hand sides
/// towards the edge of the feasible set.
inline risisac::SdpProblem random_problem(Index n, double budget, double tight, risisac::RandomStream& rng,
                                          bool rank_one_objective = false) {
  risisac::SdpProblem p;
  p.dim = n;
  p.trace_budget = budget;
  if (rank_one_objective) {
    const ComplexVector u = rng.complex_normal_vector(n);
    p.obj = outer(u, u);
  } else {
    p.obj = random_psd(n, rng);
  }
  p.comm_mat = random_psd(n, rng);
  const ComplexVector u = rng.complex_normal_vector(n);
  p.sense_mat = outer(u, u) - 0.2 * p.obj;
  p.sense_mat = 0.5 * (p.sense_mat + adjoint(p.sense_mat));
  p.comm_mat = 0.5 * (p.comm_mat + adjoint(p.comm_mat));
  const double comm_top = risisac::hermitian_evd(p.comm_mat).eigenvalues(0) * budget;
  const double sense_top = risisac::hermitian_evd(p.sense_mat).eigenvalues(0) * budget;
  p.comm_rhs = tight * 0.6 * comm_top;
  p.sense_rhs = tight * 0.6 * sense_top;
  return p;
}

/// Rejection-sampled feasible covariances with trace P_B.
inline std::vector<ComplexMatrix> random_feasible_points(const risisac::SdpProblem& p, int count,
                                                         risisac::RandomStream& rng, int max_draws = 2000000) {
  std::vector<ComplexMatrix> points;
  for (int draw = 0; draw < max_draws && static_cast<int>(points.size()) < count; ++draw) {
    // mix low and full rank draws so the sample reaches the boundary
    const Index rank = 1 + static_cast<Index>(rng.uniform() * static_cast<double>(p.dim));
    const ComplexMatrix g = rng.complex_normal_matrix(p.dim, rank);
    ComplexMatrix r = naive_product(g, adjoint(g));
    r *= p.trace_budget / r.trace().real();
    if (grid_feasible(p, r)) points.push_back(r);
  }
  return points;
}

}  // namespace oracle
