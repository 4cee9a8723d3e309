// SPDX-License-Identifier: Apache-2.0
#include "risisac/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "risisac/sysmodel.hpp"

namespace risisac {

std::string to_string(Method m) {
  switch (m) {
    case Method::proposed:
      return "proposed";
    case Method::bench1_random_phase:
      return "bench1_random_phase";
    case Method::bench2_equal_phase:
      return "bench2_equal_phase";
    case Method::bench3_no_ris:
      return "bench3_no_ris";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected proposed, bench1_random_phase, bench2_equal_phase or bench3_no_ris)");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::proposed, Method::bench1_random_phase,
                                           Method::bench2_equal_phase, Method::bench3_no_ris};
  return methods;
}

bool TrialRecord::failed() const { return sdp_status_final.rfind("error", 0) == 0; }

namespace {

double power_dbm_after_lna(double watts, const ScenarioConfig& scen) {
  if (!(watts > 0.0)) return -std::numeric_limits<double>::infinity();
  return watt_to_dbm(watts * db_to_linear(scen.G_LNA_dB));
}

TrialRecord blank_record(const ScenarioConfig& scen, Method method, std::uint64_t seed) {
  TrialRecord r;
  r.method = method;
  r.M_t = scen.M_t;
  r.M_r = scen.M_r;
  r.M = scen.M;
  r.N_x = scen.N_x;
  r.N_y = scen.N_y;
  r.L = scen.L;
  r.seed = seed;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.P_PI_dB = r.P_sense_dB = r.P_obs_dB = r.P_noise_dB = nan;
  r.sndr_dB = r.comm_snr_dB = r.dr_dB = nan;
  return r;
}

}  // namespace

TrialOutcome run_trial_detailed(const ScenarioConfig& scen, Method method, const BccdConfig& cfg,
                                const RandomStream& rng, const std::optional<ComplexVector>& phi_override) {
  const auto start = std::chrono::steady_clock::now();
  TrialOutcome out;
  out.record = blank_record(scen, method, rng.seed());
  try {
    scen.validate();
    ChannelSet ch = generate_channels(scen, rng.fork("channels"));
    BccdConfig run_cfg = cfg;
    run_cfg.seed = rng.fork("bccd").seed();
    const Index n = ch.N();
    switch (method) {
      case Method::proposed:
        run_cfg.fixed_phi.reset();
        break;
      case Method::bench1_random_phase: {
        RandomStream phase_rng = rng.fork("bench1_phi");
        run_cfg.fixed_phi = phi_override ? *phi_override : phase_rng.unit_phase_vector(n);
        break;
      }
      case Method::bench2_equal_phase:
        run_cfg.fixed_phi = ComplexVector::Ones(n);
        break;
      case Method::bench3_no_ris:
        ch = ch.without_ris();
        run_cfg.fixed_phi = ComplexVector::Ones(n);
        break;
    }
    BccdResult res = bccd_solve(run_cfg, scen, ch);
    const BccdIteration& last = res.history.back();
    TrialRecord& r = out.record;
    r.P_PI_dB = power_dbm_after_lna(last.P_PI, scen);
    r.P_sense_dB = power_dbm_after_lna(last.P_sense, scen);
    r.P_obs_dB = power_dbm_after_lna(last.P_obs, scen);
    r.P_noise_dB = power_dbm_after_lna(last.P_noise, scen);
    r.sndr_dB = last.sndr_dB;
    r.comm_snr_dB = last.comm_snr_dB;
    r.dr_dB = last.dr_dB;
    r.outer_iterations = static_cast<int>(res.history.size());
    r.sdp_status_final = to_string(last.sdp_status);
    out.bccd = std::move(res);
  } catch (const std::exception& e) {
    out.record.sdp_status_final = std::string("error: ") + e.what();
  }
  out.record.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

TrialRecord run_trial(const ScenarioConfig& scen, Method method, const BccdConfig& cfg, const RandomStream& rng) {
  return run_trial_detailed(scen, method, cfg, rng).record;
}

// ---------------------------------------------------------------- spec I/O

void to_json(nlohmann::json& j, const BccdConfig& c) {
  j = nlohmann::json{{"N_iter", c.N_iter},
                     {"sdp_tol", c.sdp_tol},
                     {"sdp_max_iters", c.sdp_max_iters},
                     {"stall_tol", c.stall_tol},
                     {"rcg_max_iterations", c.rcg.max_iterations},
                     {"rcg_grad_tol", c.rcg.grad_tol},
                     {"rcg_alpha_init", c.rcg.alpha_init}};
}

void from_json(const nlohmann::json& j, BccdConfig& c) {
  static const std::vector<std::string> keys{"N_iter",       "sdp_tol",    "sdp_max_iters", "stall_tol",
                                             "rcg_max_iterations", "rcg_grad_tol", "rcg_alpha_init"};
  for (const auto& item : j.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw std::invalid_argument("bccd config: unknown key '" + item.key() + "'");
    }
  }
  if (j.contains("N_iter")) c.N_iter = j.at("N_iter").get<int>();
  if (j.contains("sdp_tol")) c.sdp_tol = j.at("sdp_tol").get<double>();
  if (j.contains("sdp_max_iters")) c.sdp_max_iters = j.at("sdp_max_iters").get<int>();
  if (j.contains("stall_tol")) c.stall_tol = j.at("stall_tol").get<double>();
  if (j.contains("rcg_max_iterations")) c.rcg.max_iterations = j.at("rcg_max_iterations").get<int>();
  if (j.contains("rcg_grad_tol")) c.rcg.grad_tol = j.at("rcg_grad_tol").get<double>();
  if (j.contains("rcg_alpha_init")) c.rcg.alpha_init = j.at("rcg_alpha_init").get<double>();
  c.validate();
}

void SweepSpec::validate() const {
  base.validate();
  if (values.empty()) throw std::invalid_argument("sweep spec: values must be non-empty");
  if (trials_per_point < 1) throw std::invalid_argument("sweep spec: trials_per_point must be >= 1");
  if (methods.empty()) throw std::invalid_argument("sweep spec: methods must be non-empty");
  for (double v : values) (void)apply_axis(base, axis, v);
  bccd.validate();
}

void to_json(nlohmann::json& j, const SweepSpec& s) {
  std::vector<std::string> methods;
  for (Method m : s.methods) methods.push_back(to_string(m));
  j = nlohmann::json{{"base", s.base},
                     {"axis", s.axis},
                     {"values", s.values},
                     {"trials_per_point", s.trials_per_point},
                     {"methods", methods},
                     {"bccd", s.bccd}};
}

void from_json(const nlohmann::json& j, SweepSpec& s) {
  static const std::vector<std::string> keys{"base", "axis", "values", "trials_per_point", "methods", "bccd"};
  for (const auto& item : j.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw std::invalid_argument("sweep spec: unknown key '" + item.key() + "'");
    }
  }
  s = SweepSpec{};
  if (j.contains("base")) s.base = j.at("base").get<ScenarioConfig>();
  s.axis = j.at("axis").get<std::string>();
  s.values = j.at("values").get<std::vector<double>>();
  if (j.contains("trials_per_point")) s.trials_per_point = j.at("trials_per_point").get<int>();
  if (j.contains("methods")) {
    s.methods.clear();
    for (const auto& name : j.at("methods")) s.methods.push_back(method_from_string(name.get<std::string>()));
  }
  if (j.contains("bccd")) s.bccd = j.at("bccd").get<BccdConfig>();
  s.validate();
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sweep spec '" + path + "'");
  return nlohmann::json::parse(in).get<SweepSpec>();
}

ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis, double value) {
  nlohmann::json j = base;
  if (!j.contains(axis) || !j.at(axis).is_number()) {
    throw std::invalid_argument("sweep axis '" + axis + "' is not a numeric scenario field");
  }
  if (j.at(axis).is_number_integer() || j.at(axis).is_number_unsigned()) {
    if (value != std::floor(value)) {
      throw std::invalid_argument("sweep axis '" + axis + "' needs integer values");
    }
    j[axis] = static_cast<std::int64_t>(value);
  } else {
    j[axis] = value;
  }
  ScenarioConfig out = j.get<ScenarioConfig>();
  out.validate();
  return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, double value, int trial_id) {
  return combine_seed(combine_seed(base_seed, std::bit_cast<std::uint64_t>(value)),
                      static_cast<std::uint64_t>(trial_id));
}

// ---------------------------------------------------------------- sweep

SweepResult run_sweep(const SweepSpec& spec, int parallelism) {
  spec.validate();
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");

  struct Item {
    std::size_t value_index;
    int trial;
    Method method;
  };
  std::vector<Item> items;
  std::vector<ScenarioConfig> scenarios;
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    scenarios.push_back(apply_axis(spec.base, spec.axis, spec.values[v]));
    for (int t = 0; t < spec.trials_per_point; ++t) {
      for (Method m : spec.methods) items.push_back({v, t, m});
    }
  }

  SweepResult result;
  result.spec = spec;
  result.rows.resize(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= items.size()) return;
      const Item& it = items[k];
      const double value = spec.values[it.value_index];
      const RandomStream rng(trial_seed(spec.base.seed, value, it.trial));
      TrialRecord rec = run_trial(scenarios[it.value_index], it.method, spec.bccd, rng);
      rec.trial_id = it.trial;
      result.rows[k] = SweepRow{value, std::move(rec)};
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(parallelism), items.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return result;
}

double percentile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("percentile of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sample.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] + frac * (sample[hi] - sample[lo]);
}

std::vector<Aggregate> aggregate(const SweepResult& result) {
  using Getter = double TrialRecord::*;
  static const std::vector<std::pair<std::string, Getter>> metrics{
      {"P_PI_dB", &TrialRecord::P_PI_dB},         {"P_sense_dB", &TrialRecord::P_sense_dB},
      {"P_obs_dB", &TrialRecord::P_obs_dB},       {"P_noise_dB", &TrialRecord::P_noise_dB},
      {"sndr_dB", &TrialRecord::sndr_dB},         {"comm_snr_dB", &TrialRecord::comm_snr_dB},
      {"dr_dB", &TrialRecord::dr_dB}};
  std::vector<Aggregate> out;
  for (double value : result.spec.values) {
    for (Method m : result.spec.methods) {
      for (const auto& [name, field] : metrics) {
        Aggregate a;
        a.value = value;
        a.method = m;
        a.metric = name;
        std::vector<double> sample;
        for (const SweepRow& row : result.rows) {
          if (row.value != value || row.record.method != m) continue;
          const double x = row.record.*field;
          if (std::isfinite(x)) {
            sample.push_back(x);
          } else if (x < 0.0) {
            ++a.below_noise;
          }
        }
        a.count = static_cast<int>(sample.size());
        if (!sample.empty()) {
          double sum = 0.0;
          for (double x : sample) sum += x;
          a.mean = sum / static_cast<double>(sample.size());
          a.median = percentile(sample, 0.5);
          a.p10 = percentile(sample, 0.1);
          a.p90 = percentile(sample, 0.9);
        } else {
          a.mean = a.median = a.p10 = a.p90 = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(a);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string fmt_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x < 0.0 ? "below_noise" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_csv_header(std::ostream& os) {
  os << "trial_id,method,M_t,M_r,M,N_x,N_y,L,P_PI_dB,P_sense_dB,P_obs_dB,P_noise_dB,sndr_dB,"
        "comm_snr_dB,dr_dB,outer_iterations,sdp_status_final,runtime_ms,seed\r\n";
}

void write_csv_row(std::ostream& os, const TrialRecord& r) {
  char runtime[32];
  std::snprintf(runtime, sizeof runtime, "%.3f", r.runtime_ms);
  os << r.trial_id << ',' << to_string(r.method) << ',' << r.M_t << ',' << r.M_r << ',' << r.M << ',' << r.N_x
     << ',' << r.N_y << ',' << r.L << ',' << fmt_number(r.P_PI_dB) << ',' << fmt_number(r.P_sense_dB) << ','
     << fmt_number(r.P_obs_dB) << ',' << fmt_number(r.P_noise_dB) << ',' << fmt_number(r.sndr_dB) << ','
     << fmt_number(r.comm_snr_dB) << ',' << fmt_number(r.dr_dB) << ',' << r.outer_iterations << ','
     << csv_quote(r.sdp_status_final) << ',' << runtime << ',' << r.seed << "\r\n";
}

void write_aggregates_csv(std::ostream& os, const std::string& axis, const std::vector<Aggregate>& aggs) {
  os << "axis,value,method,metric,count,below_noise,mean,median,p10,p90\r\n";
  for (const Aggregate& a : aggs) {
    os << csv_quote(axis) << ',' << fmt_number(a.value) << ',' << to_string(a.method) << ',' << a.metric << ','
       << a.count << ',' << a.below_noise << ',' << fmt_number(a.mean) << ',' << fmt_number(a.median) << ','
       << fmt_number(a.p10) << ',' << fmt_number(a.p90) << "\r\n";
  }
}

void write_sweep_outputs(const SweepResult& result, const std::string& out_path) {
  {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + out_path + "'");
    write_csv_header(os);
    for (const SweepRow& row : result.rows) write_csv_row(os, row.record);
  }
  {
    std::ofstream os(out_path + ".agg.csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + out_path + ".agg.csv'");
    write_aggregates_csv(os, result.spec.axis, aggregate(result));
  }
  {
    std::ofstream os(out_path + ".json", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + out_path + ".json'");
    int failures = 0;
    for (const SweepRow& row : result.rows) failures += row.record.failed() ? 1 : 0;
    nlohmann::json side{{"spec", result.spec},
                        {"rows", result.rows.size()},
                        {"failed_rows", failures},
                        {"power_units", "dBm at the LNA output; below_noise marks zero power"},
                        {"trial_seed", "combine_seed(combine_seed(base.seed, bits(value)), trial_id)"}};
    os << side.dump(2) << '\n';
  }
}

}  // namespace risisac
