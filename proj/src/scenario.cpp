// SPDX-License-Identifier: Apache-2.0
#include "risisac/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace risisac {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

void require_count(int value, const char* name) {
  if (value < 1) throw DomainError(std::string(name) + " must be >= 1");
}

}  // namespace

void ScenarioConfig::validate() const {
  require_count(M_t, "M_t");
  require_count(M_r, "M_r");
  require_count(M, "M");
  require_count(N_x, "N_x");
  require_count(N_y, "N_y");
  require_count(L, "L");
  require_positive(f_c, "f_c");
  for (auto [value, name] : {std::pair{d_k, "d_k"}, {d_Rk, "d_Rk"}, {d_cR, "d_cR"}, {d_DPI, "d_DPI"},
                             {d_rR, "d_rR"}, {d_Bt, "d_Bt"}, {d_tP, "d_tP"}, {d_tR, "d_tR"},
                             {d_x, "d_x"}, {d_y, "d_y"}, {sigma_t, "sigma_t"},
                             {pathloss_exponent, "pathloss_exponent"}}) {
    require_positive(value, name);
  }
  if (!(A_ris > 0.0 && A_ris <= 1.0)) throw DomainError("A_ris must lie in (0, 1]");
  if (pattern_q < 0.0) throw DomainError("pattern_q must be >= 0");
  for (const Obstacle& ob : obstacles) {
    require_positive(ob.sigma_ob, "obstacle sigma_ob");
    require_positive(ob.d_Bo, "obstacle d_Bo");
    require_positive(ob.d_oP, "obstacle d_oP");
  }
}

void to_json(nlohmann::json& j, const ScenarioConfig& c) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const Obstacle& ob : c.obstacles) {
    obstacles.push_back({{"sigma_ob", ob.sigma_ob}, {"d_Bo", ob.d_Bo}, {"d_oP", ob.d_oP}});
  }
  j = nlohmann::json{
      {"M_t", c.M_t},
      {"M_r", c.M_r},
      {"M", c.M},
      {"N_x", c.N_x},
      {"N_y", c.N_y},
      {"L", c.L},
      {"f_c", c.f_c},
      {"P_T_dBm", c.P_T_dBm},
      {"G_T_dBi", c.G_T_dBi},
      {"G_R_c_dBi", c.G_R_c_dBi},
      {"G_R_PR_dBi", c.G_R_PR_dBi},
      {"G_LNA_dB", c.G_LNA_dB},
      {"d_k", c.d_k},
      {"d_Rk", c.d_Rk},
      {"d_cR", c.d_cR},
      {"d_DPI", c.d_DPI},
      {"d_rR", c.d_rR},
      {"d_Bt", c.d_Bt},
      {"d_tP", c.d_tP},
      {"d_tR", c.d_tR},
      {"pathloss_exponent", c.pathloss_exponent},
      {"A_ris", c.A_ris},
      {"d_x", c.d_x},
      {"d_y", c.d_y},
      {"radiation_pattern", c.radiation_pattern == RadiationPattern::unity ? "unity" : "cos_q"},
      {"pattern_q", c.pattern_q},
      {"theta_r", c.theta_r},
      {"theta_t", c.theta_t},
      {"sigma_t", c.sigma_t},
      {"Q", c.Q()},
      {"obstacles", obstacles},
      {"sigma_c2_dBm", c.sigma_c2_dBm},
      {"sigma_r2_dBm", c.sigma_r2_dBm},
      {"P_B_dB", c.P_B_dB},
      {"gamma_comm_dB", c.gamma_comm_dB},
      {"gamma_sense_dB", c.gamma_sense_dB},
      {"seed", c.seed},
  };
}

void from_json(const nlohmann::json& j, ScenarioConfig& c) {
  if (!j.is_object()) throw DomainError("scenario config must be a JSON object");
  static const std::set<std::string> known = {
      "M_t",        "M_r",       "M",          "N_x",          "N_y",          "L",
      "f_c",        "P_T_dBm",   "G_T_dBi",    "G_R_c_dBi",    "G_R_PR_dBi",   "G_LNA_dB",
      "d_k",        "d_Rk",      "d_cR",       "d_DPI",        "d_rR",         "d_Bt",
      "d_tP",       "d_tR",      "pathloss_exponent",          "A_ris",        "d_x",
      "d_y",        "radiation_pattern",       "pattern_q",    "theta_r",      "theta_t",
      "sigma_t",    "Q",         "obstacles",  "sigma_c2_dBm", "sigma_r2_dBm", "P_B_dB",
      "gamma_comm_dB",           "gamma_sense_dB",             "seed"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw DomainError("unknown scenario field '" + item.key() + "'");
  }

  ScenarioConfig d;  // defaults
  c.M_t = j.value("M_t", d.M_t);
  c.M_r = j.value("M_r", d.M_r);
  c.M = j.value("M", d.M);
  c.N_x = j.value("N_x", d.N_x);
  c.N_y = j.value("N_y", d.N_y);
  c.L = j.value("L", d.L);
  c.f_c = j.value("f_c", d.f_c);
  c.P_T_dBm = j.value("P_T_dBm", d.P_T_dBm);
  c.G_T_dBi = j.value("G_T_dBi", d.G_T_dBi);
  c.G_R_c_dBi = j.value("G_R_c_dBi", d.G_R_c_dBi);
  c.G_R_PR_dBi = j.value("G_R_PR_dBi", d.G_R_PR_dBi);
  c.G_LNA_dB = j.value("G_LNA_dB", d.G_LNA_dB);
  c.d_k = j.value("d_k", d.d_k);
  c.d_Rk = j.value("d_Rk", d.d_Rk);
  c.d_cR = j.value("d_cR", d.d_cR);
  c.d_DPI = j.value("d_DPI", d.d_DPI);
  c.d_rR = j.value("d_rR", d.d_rR);
  c.d_Bt = j.value("d_Bt", d.d_Bt);
  c.d_tP = j.value("d_tP", d.d_tP);
  c.d_tR = j.value("d_tR", d.d_tR);
  c.pathloss_exponent = j.value("pathloss_exponent", d.pathloss_exponent);
  c.A_ris = j.value("A_ris", d.A_ris);
  // element size defaults to 0.4 wavelengths at the configured carrier
  c.d_x = j.value("d_x", 0.4 * kSpeedOfLight / c.f_c);
  c.d_y = j.value("d_y", 0.4 * kSpeedOfLight / c.f_c);
  const std::string pattern = j.value("radiation_pattern", std::string("unity"));
  if (pattern == "unity") {
    c.radiation_pattern = RadiationPattern::unity;
  } else if (pattern == "cos_q") {
    c.radiation_pattern = RadiationPattern::cos_q;
  } else {
    throw DomainError("radiation_pattern must be 'unity' or 'cos_q'");
  }
  c.pattern_q = j.value("pattern_q", d.pattern_q);
  c.theta_r = j.value("theta_r", d.theta_r);
  c.theta_t = j.value("theta_t", d.theta_t);
  c.sigma_t = j.value("sigma_t", d.sigma_t);
  c.obstacles.clear();
  if (j.contains("obstacles")) {
    for (const auto& ob : j.at("obstacles")) {
      Obstacle o;
      o.sigma_ob = ob.value("sigma_ob", o.sigma_ob);
      o.d_Bo = ob.value("d_Bo", o.d_Bo);
      o.d_oP = ob.value("d_oP", o.d_oP);
      c.obstacles.push_back(o);
    }
  }
  if (j.contains("Q") && j.at("Q").get<int>() != c.Q()) {
    throw DomainError("Q does not match the number of listed obstacles");
  }
  c.sigma_c2_dBm = j.value("sigma_c2_dBm", d.sigma_c2_dBm);
  c.sigma_r2_dBm = j.value("sigma_r2_dBm", d.sigma_r2_dBm);
  c.P_B_dB = j.value("P_B_dB", d.P_B_dB);
  c.gamma_comm_dB = j.value("gamma_comm_dB", d.gamma_comm_dB);
  c.gamma_sense_dB = j.value("gamma_sense_dB", d.gamma_sense_dB);
  c.seed = j.value("seed", d.seed);
  c.validate();
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  return nlohmann::json::parse(in).get<ScenarioConfig>();
}

ChannelSet ChannelSet::without_ris() const {
  ChannelSet out = *this;
  out.gains.c_r = 0.0;
  out.gains.rpi = 0.0;
  out.gains.s2 = 0.0;
  out.gains.s3 = 0.0;
  out.gains.s4 = 0.0;
  return out;
}

double cos_q_pattern(double theta, double q) {
  if (theta < 0.0 || theta > kPi / 2.0) return 0.0;
  return std::pow(std::cos(theta), q);
}

RisSpec ris_spec_from(const ScenarioConfig& config) {
  RisSpec spec;
  spec.A = config.A_ris;
  spec.d_x = config.d_x;
  spec.d_y = config.d_y;
  spec.theta_r = config.theta_r;
  spec.theta_t = config.theta_t;
  if (config.radiation_pattern == RadiationPattern::cos_q) {
    spec.F_r = cos_q_pattern(config.theta_r, config.pattern_q);
    spec.F_t = cos_q_pattern(config.theta_t, config.pattern_q);
  }
  return spec;
}

double pathloss_direct(double wavelength, double P_T, double G_T, double G_R, double d,
                       double exponent) {
  for (double v : {wavelength, P_T, G_T, G_R, d}) require_positive(v, "pathloss_direct argument");
  const double four_pi = 4.0 * kPi;
  return std::sqrt(wavelength * wavelength * P_T * G_T * G_R /
                   (four_pi * four_pi * std::pow(d, exponent)));
}

double pathloss_reflected(double wavelength, double P_T, double G_T, double G_R, double sigma_ris,
                          double d1, double d2, double exponent) {
  for (double v : {wavelength, P_T, G_T, G_R, sigma_ris, d1, d2}) {
    require_positive(v, "pathloss_reflected argument");
  }
  const double four_pi = 4.0 * kPi;
  return std::sqrt(wavelength * wavelength * P_T * G_T * G_R * sigma_ris /
                   (four_pi * four_pi * four_pi * std::pow(d1, exponent) * std::pow(d2, exponent)));
}

double ris_rcs(const RisSpec& spec, double wavelength) {
  require_positive(wavelength, "wavelength");
  if (spec.F_r < 0.0 || spec.F_r > 1.0 || spec.F_t < 0.0 || spec.F_t > 1.0) {
    throw DomainError("radiation pattern values must lie in [0, 1]");
  }
  const double area = spec.d_x * spec.d_y;
  return 4.0 * kPi * spec.A * spec.A * area * area / (wavelength * wavelength) * spec.F_r * spec.F_t;
}

double higher_order_gain(int order, double wavelength, double P_T, double G_T, double G_R,
                         double sigma_ris, double sigma_t, const std::vector<double>& distances,
                         double exponent) {
  if (order < 2 || order > 4) throw DomainError("higher_order_gain: order must be 2, 3 or 4");
  if (static_cast<int>(distances.size()) != order) {
    throw DimensionError("higher_order_gain: expected " + std::to_string(order) + " distances, got " +
                         std::to_string(distances.size()));
  }
  for (double v : {wavelength, P_T, G_T, G_R, sigma_t}) require_positive(v, "higher_order_gain argument");
  if (order > 2) require_positive(sigma_ris, "higher_order_gain sigma_ris");

  double cross_section = sigma_t;
  for (int k = 2; k < order; ++k) cross_section *= sigma_ris;
  double denominator = std::pow(4.0 * kPi, order + 1);
  for (double d : distances) {
    require_positive(d, "higher_order_gain distance");
    denominator *= std::pow(d, exponent);
  }
  return std::sqrt(wavelength * wavelength * P_T * G_T * G_R * cross_section / denominator);
}

PathGains gain_magnitudes(const ScenarioConfig& c) {
  const double lambda = c.wavelength();
  const double P_T = c.P_T();
  const double G_T = db_to_linear(c.G_T_dBi);
  const double G_Rc = db_to_linear(c.G_R_c_dBi);
  const double G_Rp = db_to_linear(c.G_R_PR_dBi);
  const double n = c.pathloss_exponent;
  const double sigma_ris = ris_rcs(ris_spec_from(c), lambda);

  PathGains g;
  g.c_d = pathloss_direct(lambda, P_T, G_T, G_Rc, c.d_k, n);
  g.dpi = pathloss_direct(lambda, P_T, G_T, G_Rp, c.d_DPI, n);
  g.s1 = higher_order_gain(2, lambda, P_T, G_T, G_Rp, sigma_ris, c.sigma_t, {c.d_Bt, c.d_tP}, n);
  // A null radiation pattern switches every RIS-coupled path off.
  if (sigma_ris > 0.0) {
    g.c_r = pathloss_reflected(lambda, P_T, G_T, G_Rc, sigma_ris, c.d_Rk, c.d_cR, n);
    g.rpi = pathloss_reflected(lambda, P_T, G_T, G_Rp, sigma_ris, c.d_rR, c.d_cR, n);
    g.s2 = higher_order_gain(3, lambda, P_T, G_T, G_Rp, sigma_ris, c.sigma_t, {c.d_Bt, c.d_tR, c.d_rR}, n);
    g.s3 = higher_order_gain(3, lambda, P_T, G_T, G_Rp, sigma_ris, c.sigma_t, {c.d_cR, c.d_tR, c.d_tP}, n);
    g.s4 = higher_order_gain(4, lambda, P_T, G_T, G_Rp, sigma_ris, c.sigma_t,
                             {c.d_cR, c.d_tR, c.d_tR, c.d_rR}, n);
  }
  return g;
}

ChannelSet generate_channels(const ScenarioConfig& c, const RandomStream& rng) {
  c.validate();
  const Index M_t = c.M_t, M_r = c.M_r, M = c.M, N = c.N();
  ChannelSet ch;

  const PathGains mag = gain_magnitudes(c);
  RandomStream phases = rng.fork("gain_phases");
  ch.gains.c_d = mag.c_d * phases.unit_phase();
  ch.gains.c_r = mag.c_r * phases.unit_phase();
  ch.gains.dpi = mag.dpi * phases.unit_phase();
  ch.gains.rpi = mag.rpi * phases.unit_phase();
  ch.gains.s1 = mag.s1 * phases.unit_phase();
  ch.gains.s2 = mag.s2 * phases.unit_phase();
  ch.gains.s3 = mag.s3 * phases.unit_phase();
  ch.gains.s4 = mag.s4 * phases.unit_phase();

  ch.H_k = rng.fork("H_k").complex_normal_matrix(M_r, M_t);
  ch.H_DPI = rng.fork("H_DPI").complex_normal_matrix(M, M_t);
  ch.g_t = rng.fork("g_t").complex_normal_vector(M);
  ch.h_t = rng.fork("h_t").complex_normal_vector(M_t);

  RandomStream obstacle_stream = rng.fork("obstacles");
  const double lambda = c.wavelength();
  for (const Obstacle& ob : c.obstacles) {
    ObstacleChannel oc;
    oc.g_ob = obstacle_stream.complex_normal_vector(M);
    oc.h_ob = obstacle_stream.complex_normal_vector(M_t);
    const double magnitude =
        higher_order_gain(2, lambda, c.P_T(), db_to_linear(c.G_T_dBi), db_to_linear(c.G_R_PR_dBi), 1.0,
                          ob.sigma_ob, {ob.d_Bo, ob.d_oP}, c.pathloss_exponent);
    oc.gain = magnitude * obstacle_stream.unit_phase();
    ch.obstacles.push_back(std::move(oc));
  }

  ch.H_Rk = rng.fork("H_Rk").complex_normal_matrix(M_r, N);
  ch.H_cR = rng.fork("H_cR").complex_normal_matrix(N, M_t);
  ch.G_rR = rng.fork("G_rR").complex_normal_matrix(N, M);
  ch.g_Rt = rng.fork("g_Rt").complex_normal_vector(N);
  return ch;
}

}  // namespace risisac
