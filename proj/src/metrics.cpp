// SPDX-License-Identifier: Apache-2.0
#include "risisac/metrics.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace risisac {

namespace {

std::atomic<std::uint64_t> g_clamp_count{0};

double clamp_power(double value, double largest_term) {
  if (value >= 0.0) return value;
  if (value < -1e-9 * largest_term) g_clamp_count.fetch_add(1, std::memory_order_relaxed);
  return 0.0;
}

void check_quadratic_dims(const ComplexMatrix& block, const ComplexVector& w, Index rss_dim) {
  if (block.rows() == 0 || w.size() % block.rows() != 0) {
    throw DimensionError("power_quadratic: beamformer length " + std::to_string(w.size()) +
                         " is not a multiple of M = " + std::to_string(block.rows()));
  }
  const Index L = w.size() / block.rows();
  if (rss_dim != L * block.cols()) {
    throw DimensionError("power_quadratic: R_ss dimension " + std::to_string(rss_dim) + " != L*M_t = " +
                         std::to_string(L * block.cols()));
  }
}

}  // namespace

std::uint64_t negative_power_clamp_count() { return g_clamp_count.load(); }

double power_quadratic(const ComplexMatrix& block, const ComplexVector& w, const EvdResult& R_evd) {
  check_quadratic_dims(block, w, R_evd.eigenvectors.rows());
  const Index L = w.size() / block.rows();
  // w^H (I (x) B) v = ((I (x) B)^H w)^H v
  const ComplexVector u = kron_identity_adjoint_apply(block, w, L);
  double total = 0.0, largest = 0.0;
  for (Index i = 0; i < R_evd.eigenvalues.size(); ++i) {
    const double term = R_evd.eigenvalues(i) * std::norm(u.dot(R_evd.eigenvectors.col(i)));
    total += term;
    largest = std::max(largest, std::abs(term));
  }
  return clamp_power(total, largest);
}

double power_quadratic(const ComplexMatrix& block, const ComplexVector& w, const ComplexMatrix& R_ss) {
  require_hermitian(R_ss, "power_quadratic");
  check_quadratic_dims(block, w, R_ss.rows());
  return power_quadratic(block, w, hermitian_evd(R_ss));
}

double power_noise(const ComplexVector& w, double sigma_r2) {
  require_unit_modulus(w, "power_noise");
  return sigma_r2 * static_cast<double>(w.size());
}

double sndr(const PowerBreakdown& p) {
  const double denominator = p.P_PI + p.P_obs + p.P_noise;
  if (!(denominator > 0.0)) throw DegenerateInputError("sndr: interference-plus-noise power is zero");
  return p.P_sense / denominator;
}

double comm_snr(const ComplexMatrix& Hc_block, const ComplexMatrix& R_ss, Index M_r, Index L, double sigma_c2) {
  const Index M_t = Hc_block.cols();
  if (R_ss.rows() != L * M_t || R_ss.cols() != L * M_t) {
    throw DimensionError("comm_snr: R_ss must be (L*M_t) square");
  }
  if (!(sigma_c2 > 0.0) || M_r < 1 || L < 1) throw DegenerateInputError("comm_snr: zero normalisation");
  const ComplexMatrix gram = Hc_block.adjoint() * Hc_block;
  double trace = 0.0;
  for (Index l = 0; l < L; ++l) {
    // tr(R_ll G) = sum_ij R_ll(i,j) G(j,i)
    trace += (R_ss.block(l * M_t, l * M_t, M_t, M_t).array() * gram.transpose().array()).sum().real();
  }
  return std::max(trace, 0.0) / (static_cast<double>(M_r) * static_cast<double>(L) * sigma_c2);
}

double dynamic_range(double P_PI, double P_noise) {
  if (!(P_noise > 0.0)) throw DegenerateInputError("dynamic_range: noise power is zero");
  return P_PI / P_noise;
}

double to_db_or_sentinel(double linear) {
  if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(linear);
}

double adc_snr(double enob) {
  if (enob < 0.0) throw DomainError("adc_snr: negative ENOB");
  return 6.02 * enob + 1.76;
}

double adc_power(double bits, double f_samp, double figure_of_merit) {
  if (!(figure_of_merit > 0.0)) throw DomainError("adc_power: figure of merit must be positive");
  return std::exp2(bits) * f_samp / figure_of_merit;
}

PowerBreakdown compute_breakdown(const EffectiveChannels& eff, const ComplexVector& w,
                                 const ComplexMatrix& R_ss, const ScenarioConfig& cfg) {
  const EvdResult evd = hermitian_evd(R_ss);
  PowerBreakdown p;
  p.P_PI = power_quadratic(eff.Ac_block, w, evd);
  p.P_sense = power_quadratic(eff.Ar_block, w, evd);
  p.P_obs = power_quadratic(eff.Ao_block, w, evd);
  p.P_noise = power_noise(w, cfg.sigma_r2());
  p.sndr_dB = to_db_or_sentinel(sndr(p));
  p.comm_snr_dB = to_db_or_sentinel(comm_snr(eff.Hc_block, R_ss, cfg.M_r, cfg.L, cfg.sigma_c2()));
  p.dr_dB = to_db_or_sentinel(dynamic_range(p.P_PI, p.P_noise));
  return p;
}

}  // namespace risisac
