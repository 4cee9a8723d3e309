// SPDX-License-Identifier: Apache-2.0
#include "risisac/sysmodel.hpp"

#include <string>

namespace risisac {

void require_unit_modulus(const ComplexVector& v, const char* what, double tol) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(std::abs(v(i)) - 1.0) > tol) {
      throw DomainError(std::string(what) + ": entry " + std::to_string(i) + " is not unit modulus");
    }
  }
}

namespace {

void require_phase_length(const ChannelSet& ch, const ComplexVector& phi, const char* what) {
  if (phi.size() != ch.N()) {
    throw DimensionError(std::string(what) + ": phase vector has length " + std::to_string(phi.size()) +
                         ", RIS has " + std::to_string(ch.N()) + " elements");
  }
  require_unit_modulus(phi, what);
}

// G_rR^H diag(phi) H_cR, with diag(phi) applied as a row scaling
ComplexMatrix ris_bounce(const ComplexMatrix& g_rr, const ComplexVector& phi, const ComplexMatrix& h_cr) {
  return g_rr.adjoint() * (phi.asDiagonal() * h_cr);
}

}  // namespace

ComplexMatrix build_comm_channel(const ChannelSet& ch, const ComplexVector& phi) {
  require_phase_length(ch, phi, "build_comm_channel");
  if (ch.H_Rk.cols() != ch.N() || ch.H_k.cols() != ch.H_cR.cols()) {
    throw DimensionError("build_comm_channel: inconsistent channel shapes");
  }
  ComplexMatrix out = ch.gains.c_d * ch.H_k;
  if (ch.gains.c_r != 0.0) out += ch.gains.c_r * (ch.H_Rk * (phi.asDiagonal() * ch.H_cR));
  return out;
}

ComplexMatrix build_pi_channel(const ChannelSet& ch, const ComplexVector& phi) {
  require_phase_length(ch, phi, "build_pi_channel");
  if (ch.G_rR.rows() != ch.N() || ch.G_rR.cols() != ch.M()) {
    throw DimensionError("build_pi_channel: inconsistent channel shapes");
  }
  ComplexMatrix out = ch.gains.dpi * ch.H_DPI;
  if (ch.gains.rpi != 0.0) out += ch.gains.rpi * ris_bounce(ch.G_rR, phi, ch.H_cR);
  return out;
}

std::array<ComplexMatrix, 4> sensing_path_terms(const ChannelSet& ch, const ComplexVector& phi) {
  require_phase_length(ch, phi, "build_sensing_channel");
  if (ch.g_t.size() != ch.M() || ch.h_t.size() != ch.M_t() || ch.g_Rt.size() != ch.N()) {
    throw DimensionError("build_sensing_channel: inconsistent target channel shapes");
  }
  const PathGains& g = ch.gains;
  // RIS -> PR leg seen from the target: G_rR^H diag(phi) g_Rt (length M)
  const ComplexVector to_pr = ch.G_rR.adjoint() * phi.cwiseProduct(ch.g_Rt);
  // BS -> RIS -> target leg: g_Rt^H diag(phi) H_cR (1 x M_t)
  const Eigen::RowVectorXcd from_bs = (ch.g_Rt.conjugate().cwiseProduct(phi)).transpose() * ch.H_cR;

  std::array<ComplexMatrix, 4> terms;
  terms[0] = g.s1 * ch.g_t * ch.h_t.adjoint();
  terms[1] = g.s2 * to_pr * ch.h_t.adjoint();
  terms[2] = g.s3 * ch.g_t * from_bs;
  terms[3] = g.s4 * to_pr * from_bs;
  return terms;
}

ComplexMatrix build_sensing_channel(const ChannelSet& ch, const ComplexVector& phi) {
  const auto terms = sensing_path_terms(ch, phi);
  return terms[0] + terms[1] + terms[2] + terms[3];
}

ComplexMatrix build_obstacle_channel(const ChannelSet& ch) {
  ComplexMatrix out = ComplexMatrix::Zero(ch.M(), ch.M_t());
  for (const ObstacleChannel& ob : ch.obstacles) {
    if (ob.g_ob.size() != ch.M() || ob.h_ob.size() != ch.M_t()) {
      throw DimensionError("build_obstacle_channel: inconsistent obstacle channel shapes");
    }
    out += ob.gain * ob.g_ob * ob.h_ob.adjoint();
  }
  return out;
}

EffectiveChannels build_effective_channels(const ChannelSet& ch, const ComplexVector& phi) {
  return {build_comm_channel(ch, phi), build_pi_channel(ch, phi), build_sensing_channel(ch, phi),
          build_obstacle_channel(ch)};
}

}  // namespace risisac
