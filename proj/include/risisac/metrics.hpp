// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

#include "risisac/numkernel.hpp"
#include "risisac/scenario.hpp"
#include "risisac/sysmodel.hpp"

namespace risisac {

/// Receive-side powers after the analog beamformer for one configuration.
/// Powers are in W at the PR input (before the LNA gain).
struct PowerBreakdown {
  double P_PI = 0.0;
  double P_sense = 0.0;
  double P_obs = 0.0;
  double P_noise = 0.0;
  double sndr_dB = 0.0;
  double comm_snr_dB = 0.0;
  double dr_dB = 0.0;  // -inf when P_PI == 0 ("below noise")
};

/// w^H (I_L (x) B) R (I_L (x) B)^H w, evaluated through the eigenpairs of R
/// as sum_i lambda_i |w^H (I_L (x) B) v_i|^2. Negative round-off is clamped.
double power_quadratic(const ComplexMatrix& block, const ComplexVector& w, const ComplexMatrix& R_ss);

/// Same as above with the eigendecomposition of R supplied by the caller.
double power_quadratic(const ComplexMatrix& block, const ComplexVector& w, const EvdResult& R_evd);

/// sigma_r^2 * ||w||^2, which is sigma_r^2 * LM for a unit-modulus w.
double power_noise(const ComplexVector& w, double sigma_r2);

/// P_sense / (P_PI + P_obs + P_noise). Throws DegenerateInputError on a zero denominator.
double sndr(const PowerBreakdown& p);

/// tr(R (I_L (x) Hc)^H (I_L (x) Hc)) / (M_r L sigma_c^2), summed over the
/// diagonal blocks of R.
double comm_snr(const ComplexMatrix& Hc_block, const ComplexMatrix& R_ss, Index M_r, Index L, double sigma_c2);

/// P_PI / P_noise. Throws DegenerateInputError when P_noise == 0.
double dynamic_range(double P_PI, double P_noise);

/// 10 log10 with 0 -> -inf (the "below noise" sentinel).
double to_db_or_sentinel(double linear);

/// Ideal-ADC SNR in dBFS for the given effective number of bits.
double adc_snr(double enob);

/// ADC dissipated power 2^b f_samp / F_om, W.
double adc_power(double bits, double f_samp, double figure_of_merit);

/// Evaluate every power and ratio of the configuration (w, phi, R).
PowerBreakdown compute_breakdown(const EffectiveChannels& eff, const ComplexVector& w,
                                 const ComplexMatrix& R_ss, const ScenarioConfig& cfg);

/// Number of clamps of a significantly negative quadratic form (below
/// -1e-9 of its largest term) since process start.
std::uint64_t negative_power_clamp_count();

}  // namespace risisac
