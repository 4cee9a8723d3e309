// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "risisac/numkernel.hpp"
#include "risisac/random.hpp"

namespace risisac {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

double db_to_linear(double db);
double linear_to_db(double linear);
/// dBm -> W.
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

enum class RadiationPattern { unity, cos_q };

/// One static scatterer in the scene, seen by the PR through a
/// BS -> obstacle -> PR double hop.
struct Obstacle {
  double sigma_ob = 1.0;  // m^2
  double d_Bo = 100.0;    // BS -> obstacle, m
  double d_oP = 100.0;    // obstacle -> PR, m
};

/// Physical and constraint parameters of one scenario.
///
/// Distances follow the channel naming: d_cR is BS -> RIS (H_cR), d_Rk is
/// RIS -> user (H_Rk), d_rR is RIS -> PR (G_rR). The defaults place the RIS
/// a few metres from both the BS and the PR so that reflected paths are
/// comparable to the direct ones with a few tens of elements.
struct ScenarioConfig {
  int M_t = 2;
  int M_r = 1;
  int M = 4;
  int N_x = 2;
  int N_y = 2;
  int L = 2;

  double f_c = 28e9;
  double P_T_dBm = 40.0;
  double G_T_dBi = 25.0;
  double G_R_c_dBi = 12.0;
  double G_R_PR_dBi = 25.0;
  double G_LNA_dB = 40.0;

  double d_k = 150.0;
  double d_Rk = 4.0;
  double d_cR = 2.0;
  double d_DPI = 300.0;
  double d_rR = 2.0;
  double d_Bt = 100.0;  // BS -> target
  double d_tP = 100.0;  // target -> PR
  double d_tR = 50.0;   // target -> RIS

  double pathloss_exponent = 2.0;
  double A_ris = 1.0;
  double d_x = 0.4 * kSpeedOfLight / 28e9;
  double d_y = 0.4 * kSpeedOfLight / 28e9;
  RadiationPattern radiation_pattern = RadiationPattern::unity;
  double pattern_q = 1.0;
  double theta_r = 0.0;  // elevation towards the illuminator, rad
  double theta_t = 0.0;  // elevation towards target / PR, rad

  double sigma_t = 10.0;  // m^2
  std::vector<Obstacle> obstacles;

  double sigma_c2_dBm = -80.0;
  double sigma_r2_dBm = -80.0;
  double P_B_dB = 0.0;
  double gamma_comm_dB = 0.0;
  double gamma_sense_dB = 0.0;

  std::uint64_t seed = 1;

  int N() const { return N_x * N_y; }
  int Q() const { return static_cast<int>(obstacles.size()); }
  double wavelength() const { return kSpeedOfLight / f_c; }
  double P_T() const { return dbm_to_watt(P_T_dBm); }
  double P_B() const { return db_to_linear(P_B_dB); }
  double sigma_c2() const { return dbm_to_watt(sigma_c2_dBm); }
  double sigma_r2() const { return dbm_to_watt(sigma_r2_dBm); }
  double gamma_comm() const { return db_to_linear(gamma_comm_dB); }
  double gamma_sense() const { return db_to_linear(gamma_sense_dB); }

  /// Throws DomainError on any violated range.
  void validate() const;
};

void to_json(nlohmann::json& j, const ScenarioConfig& c);
void from_json(const nlohmann::json& j, ScenarioConfig& c);
ScenarioConfig load_scenario(const std::string& path);

/// Complex (linear-scale) gains of every propagation path.
struct PathGains {
  Complex c_d{0.0, 0.0};
  Complex c_r{0.0, 0.0};
  Complex dpi{0.0, 0.0};
  Complex rpi{0.0, 0.0};
  Complex s1{0.0, 0.0};
  Complex s2{0.0, 0.0};
  Complex s3{0.0, 0.0};
  Complex s4{0.0, 0.0};
};

struct ObstacleChannel {
  ComplexVector g_ob;  // M
  ComplexVector h_ob;  // M_t
  Complex gain{0.0, 0.0};
};

/// One realisation of every normalised channel and complex path gain.
struct ChannelSet {
  ComplexMatrix H_k;    // M_r x M_t
  ComplexMatrix H_Rk;   // M_r x N
  ComplexMatrix H_cR;   // N x M_t
  ComplexMatrix H_DPI;  // M x M_t
  ComplexMatrix G_rR;   // N x M
  ComplexVector g_t;    // M
  ComplexVector h_t;    // M_t
  ComplexVector g_Rt;   // N
  std::vector<ObstacleChannel> obstacles;
  PathGains gains;

  Index M_t() const { return H_DPI.cols(); }
  Index M() const { return H_DPI.rows(); }
  Index M_r() const { return H_k.rows(); }
  Index N() const { return H_cR.rows(); }

  /// Copy with every RIS-coupled gain set to zero (no-RIS deployment).
  ChannelSet without_ris() const;
};

struct RisSpec {
  double A = 1.0;
  double d_x = 0.0;
  double d_y = 0.0;
  double phi_r = 0.0, theta_r = 0.0;
  double phi_t = 0.0, theta_t = 0.0;
  double F_r = 1.0;
  double F_t = 1.0;
};

/// cos^q elevation pattern, zero behind the surface.
double cos_q_pattern(double theta, double q);

RisSpec ris_spec_from(const ScenarioConfig& config);

/// |gamma| of a single hop. `exponent` generalises the free-space d^2.
double pathloss_direct(double wavelength, double P_T, double G_T, double G_R, double d,
                       double exponent = 2.0);

/// |gamma| of a two-hop path through a scatterer of cross-section sigma_ris.
double pathloss_reflected(double wavelength, double P_T, double G_T, double G_R, double sigma_ris,
                          double d1, double d2, double exponent = 2.0);

/// Radar cross-section of one RIS element, m^2.
double ris_rcs(const RisSpec& spec, double wavelength);

/// |gamma_s| of the 2-, 3- or 4-hop sensing paths. One distance per hop;
/// the scatterer product is sigma_t, sigma_t*sigma_ris, sigma_t*sigma_ris^2.
double higher_order_gain(int order, double wavelength, double P_T, double G_T, double G_R,
                         double sigma_ris, double sigma_t, const std::vector<double>& distances,
                         double exponent = 2.0);

/// Path-gain magnitudes for `config`, in the PathGains layout (zero phase).
PathGains gain_magnitudes(const ScenarioConfig& config);

/// Rayleigh draw of every channel plus uniform gain phases. Channels that do
/// not touch the RIS come from sub-streams independent of N, so changing the
/// RIS size leaves them untouched for a fixed seed.
ChannelSet generate_channels(const ScenarioConfig& config, const RandomStream& rng);

}  // namespace risisac
