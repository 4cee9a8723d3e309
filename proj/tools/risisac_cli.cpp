// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "risisac/bench.hpp"
#include "risisac/self_check.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kSolverFailure = 2;
constexpr int kSelfCheckFailure = 3;

// A run config is either a bare scenario object or {"scenario": ..., "bccd": ...}.
void load_run_config(const std::string& path, risisac::ScenarioConfig& scen, risisac::BccdConfig& bccd) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("scenario")) {
    for (const auto& item : j.items()) {
      if (item.key() != "scenario" && item.key() != "bccd") {
        throw std::invalid_argument("run config: unknown key '" + item.key() + "'");
      }
    }
    scen = j.at("scenario").get<risisac::ScenarioConfig>();
    if (j.contains("bccd")) bccd = j.at("bccd").get<risisac::BccdConfig>();
  } else {
    scen = j.get<risisac::ScenarioConfig>();
  }
  scen.validate();
}

int cmd_run(const std::string& config, const std::string& method_name, std::uint64_t seed, const std::string& out) {
  risisac::ScenarioConfig scen;
  risisac::BccdConfig bccd;
  risisac::Method method;
  try {
    load_run_config(config, scen, bccd);
    method = risisac::method_from_string(method_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  const risisac::TrialRecord rec = risisac::run_trial(scen, method, bccd, risisac::RandomStream(seed));
  std::ofstream os(out, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot write '" << out << "'\n";
    return kUsage;
  }
  risisac::write_csv_header(os);
  risisac::write_csv_row(os, rec);
  if (rec.failed() || rec.sdp_status_final == "infeasible") {
    std::cerr << "solver failure: " << rec.sdp_status_final << '\n';
    return kSolverFailure;
  }
  std::cout << risisac::to_string(method) << ": P_PI " << rec.P_PI_dB << " dBm, SNDR " << rec.sndr_dB
            << " dB, comm SNR " << rec.comm_snr_dB << " dB, " << rec.outer_iterations << " outer iterations\n";
  return kOk;
}

int cmd_sweep(const std::string& spec_path, int parallelism, const std::string& out) {
  risisac::SweepSpec spec;
  try {
    spec = risisac::load_sweep_spec(spec_path);
    if (parallelism < 1) throw std::invalid_argument("--parallelism must be >= 1");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  const risisac::SweepResult result = risisac::run_sweep(spec, parallelism);
  try {
    risisac::write_sweep_outputs(result, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  int failures = 0;
  for (const auto& row : result.rows) failures += row.record.failed() ? 1 : 0;
  std::cout << result.rows.size() << " rows written to " << out << " (" << failures << " failed)\n";
  return failures == 0 ? kOk : kSolverFailure;
}

int cmd_check(bool inject_fault) {
  risisac::SelfCheckOptions options;
  options.corrupt_gradient = inject_fault;
  const risisac::SelfCheckReport report = risisac::self_check(options);
  report.print(std::cout);
  return report.all_passed() ? kOk : kSelfCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-interference minimisation for RIS-aided bistatic ISAC"};
  app.require_subcommand(1);

  std::string config, method, out, spec;
  std::uint64_t seed = 1;
  int parallelism = 1;

  CLI::App* run = app.add_subcommand("run", "Run one trial of one method");
  run->add_option("--config", config, "Scenario JSON")->required();
  run->add_option("--method", method, "proposed | bench1_random_phase | bench2_equal_phase | bench3_no_ris")
      ->required();
  run->add_option("--seed", seed, "Trial seed")->required();
  run->add_option("--out", out, "Output CSV")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo parameter sweep");
  sweep->add_option("--spec", spec, "Sweep spec JSON")->required();
  sweep->add_option("--parallelism", parallelism, "Worker threads")->required();
  sweep->add_option("--out", out, "Output CSV")->required();

  CLI::App* check = app.add_subcommand("check", "Run the built-in invariant suite");
  bool inject_fault = false;
  // Hidden test hook: flips the gradient sign so the suite must fail.
  check->add_flag("--inject-gradient-fault", inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(config, method, seed, out);
    if (sweep->parsed()) return cmd_sweep(spec, parallelism, out);
    if (check->parsed()) return cmd_check(inject_fault);
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}
