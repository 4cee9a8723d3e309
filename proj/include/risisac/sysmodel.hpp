// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "risisac/numkernel.hpp"
#include "risisac/scenario.hpp"

namespace risisac {

/// Repeated diagonal blocks of the space-time channels. The full operators
/// are I_L (x) block; they are never materialised.
struct EffectiveChannels {
  ComplexMatrix Hc_block;  // M_r x M_t, BS -> user
  ComplexMatrix Ac_block;  // M x M_t, path interference (DPI + RPI)
  ComplexMatrix Ar_block;  // M x M_t, four sensing paths
  ComplexMatrix Ao_block;  // M x M_t, obstacles
};

/// gamma_c_d H_k + gamma_c_r H_Rk diag(phi) H_cR
ComplexMatrix build_comm_channel(const ChannelSet& ch, const ComplexVector& phi);

/// gamma_DPI H_DPI + gamma_RPI G_rR^H diag(phi) H_cR
ComplexMatrix build_pi_channel(const ChannelSet& ch, const ComplexVector& phi);

/// The four sensing-path terms, in path order (direct echo first). The last
/// one passes the RIS twice and is quadratic in phi.
std::array<ComplexMatrix, 4> sensing_path_terms(const ChannelSet& ch, const ComplexVector& phi);

/// Sum of sensing_path_terms.
ComplexMatrix build_sensing_channel(const ChannelSet& ch, const ComplexVector& phi);

/// sum_i gamma_ob,i g_ob,i h_ob,i^H (zero when there are no obstacles).
ComplexMatrix build_obstacle_channel(const ChannelSet& ch);

EffectiveChannels build_effective_channels(const ChannelSet& ch, const ComplexVector& phi);

/// Throws DomainError unless every |phi_n| is 1 within `tol`.
void require_unit_modulus(const ComplexVector& v, const char* what, double tol = 1e-9);

}  // namespace risisac
