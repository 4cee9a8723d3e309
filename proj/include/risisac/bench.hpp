// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "risisac/bccd.hpp"
#include "risisac/random.hpp"
#include "risisac/scenario.hpp"

namespace risisac {

enum class Method { proposed, bench1_random_phase, bench2_equal_phase, bench3_no_ris };

std::string to_string(Method m);
/// Throws std::invalid_argument on an unknown name.
Method method_from_string(const std::string& name);
const std::vector<Method>& all_methods();

/// One CSV row. Powers are in dBm at the LNA output; -inf encodes "below noise".
struct TrialRecord {
  int trial_id = 0;
  Method method = Method::proposed;
  int M_t = 0, M_r = 0, M = 0, N_x = 0, N_y = 0, L = 0;
  double P_PI_dB = 0.0;
  double P_sense_dB = 0.0;
  double P_obs_dB = 0.0;
  double P_noise_dB = 0.0;
  double sndr_dB = 0.0;
  double comm_snr_dB = 0.0;
  double dr_dB = 0.0;
  int outer_iterations = 0;
  std::string sdp_status_final;  // optimal | infeasible | max_iters | error: ...
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;

  bool failed() const;
};

struct TrialOutcome {
  TrialRecord record;
  std::optional<BccdResult> bccd;  // empty when the solver threw
};

/// Seeds of one trial: channels, benchmark phases and the BCCD start all
/// come from sub-streams of `rng`, so every method sees the same channels.
TrialOutcome run_trial_detailed(const ScenarioConfig& scen, Method method, const BccdConfig& cfg,
                                const RandomStream& rng,
                                const std::optional<ComplexVector>& phi_override = std::nullopt);

TrialRecord run_trial(const ScenarioConfig& scen, Method method, const BccdConfig& cfg, const RandomStream& rng);

struct SweepSpec {
  ScenarioConfig base;
  std::string axis = "M";
  std::vector<double> values;
  int trials_per_point = 50;
  std::vector<Method> methods = all_methods();
  BccdConfig bccd;

  void validate() const;
};

void to_json(nlohmann::json& j, const SweepSpec& s);
void from_json(const nlohmann::json& j, SweepSpec& s);
SweepSpec load_sweep_spec(const std::string& path);

/// Scenario with the swept field set to `value`.
ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis, double value);

/// Seed of trial `trial_id` at axis value `value`.
std::uint64_t trial_seed(std::uint64_t base_seed, double value, int trial_id);

struct SweepRow {
  double value = 0.0;
  TrialRecord record;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // sorted by (value index, trial, method)
};

SweepResult run_sweep(const SweepSpec& spec, int parallelism);

/// Per (value, method) statistics of one column, finite entries only.
struct Aggregate {
  double value = 0.0;
  Method method = Method::proposed;
  std::string metric;
  int count = 0;
  int below_noise = 0;
  double mean = 0.0, median = 0.0, p10 = 0.0, p90 = 0.0;
};

std::vector<Aggregate> aggregate(const SweepResult& result);

/// Linear-interpolated percentile (q in [0, 1]) of a non-empty sample.
double percentile(std::vector<double> sample, double q);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const TrialRecord& r);
void write_aggregates_csv(std::ostream& os, const std::string& axis, const std::vector<Aggregate>& aggs);

/// Writes <out> (rows), <out>.agg.csv and <out>.json (provenance).
void write_sweep_outputs(const SweepResult& result, const std::string& out_path);

void to_json(nlohmann::json& j, const BccdConfig& c);
void from_json(const nlohmann::json& j, BccdConfig& c);

}  // namespace risisac
