// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// jointopt: command-line front end.
//
//   jointopt validate --suite estimation|waterfill|structure|convergence|all
//   jointopt sweep --config run.json --out rows.csv [--curve curves.csv] [--timing]
//   jointopt solve --config run.json --metric mi|wmse --csi stat|est --method opt|uniform|eigapprox [--bits]
//
// Exit status: 0 success, 1 validation failure, 2 usage or configuration error.

#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jointopt/config_io.hpp"
#include "jointopt/parallel.hpp"
#include "jointopt/validation.hpp"

namespace {

using namespace jointopt;

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kUsage = 2;

int cmd_validate(const std::string& suite_name) {
  std::vector<Suite> suites;
  if (suite_name == "all") {
    suites = {Suite::Estimation, Suite::WaterfillOracles, Suite::StructureChecks, Suite::Convergence};
  } else if (auto s = parse_suite(suite_name)) {
    suites = {*s};
  } else {
    std::cerr << "unknown suite '" << suite_name << "'\n";
    return kUsage;
  }
  ValidationReport all;
  for (Suite s : suites) {
    ValidationReport r = run_validation(s);
    all.checks.insert(all.checks.end(), r.checks.begin(), r.checks.end());
  }
  write_report(std::cout, all);
  return all.passed() ? kOk : kValidationFailed;
}

int cmd_sweep(const std::string& config, const std::string& out_path, const std::string& curve_path, bool timing) {
  const RunConfig rc = load_config(config);
  if (!rc.sweep) throw ConfigError("config has no 'sweep' section");
  const auto rows = run_sweep(*rc.sweep, rc.scenario);
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  write_sweep_csv(out, *rc.sweep, rows, timing);
  if (!curve_path.empty()) {
    std::ofstream curve(curve_path);
    if (!curve) throw ConfigError("cannot write '" + curve_path + "'");
    write_curves_csv(curve, rows);
  }
  return kOk;
}

int cmd_solve(const std::string& config, const std::string& metric_name, const std::string& csi_name,
              const std::string& method_name, bool bits) {
  RunConfig rc = load_config(config);
  const auto kind = parse_metric_kind(metric_name);
  const auto csi = parse_csi_mode(csi_name);
  const auto method = parse_method(method_name);
  if (!kind || !csi || !method) throw ConfigError("invalid --metric, --csi or --method value");
  if (bits && *kind != MetricKind::MI) throw ConfigError("--bits applies to the mi metric only");
  rc.metric.kind = *kind;
  check_method(*csi, *method);
  if (*csi == CsiMode::Estimated) rc.mc.validate();

  const SolveOutcome r = solve(rc.scenario, rc.metric, *csi, *method, rc.mc, rc.range);
  const double scale = bits ? 1.0 / std::log(2.0) : 1.0;
  const auto& s = r.solution;
  nlohmann::ordered_json j;
  j["metric"] = metric_name;
  j["csi"] = csi_name;
  j["method"] = method_name;
  j["units"] = *kind == MetricKind::MI ? (bits ? "bits/symbol" : "nats/symbol") : "weighted mse";
  j["objective"] = r.objective * scale;
  j["objective_se"] = r.objective_se * scale;
  j["t_train"] = s.t_train;
  j["data_power"] = s.data_power;
  j["iterations"] = s.iterations;
  j["status"] = r.flagged ? "max_iters" : "converged";
  j["x_powers"] = std::vector<double>(s.x_powers.data(), s.x_powers.data() + s.x_powers.size());
  j["f_powers"] = std::vector<double>(s.f_powers.data(), s.f_powers.data() + s.f_powers.size());
  std::cout << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint training and precoder optimization for correlated MIMO channels"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (overrides " + std::string(kThreadsEnvVar) + ")");

  std::string suite = "all";
  auto* validate = app.add_subcommand("validate", "Run self-check suites");
  validate->add_option("--suite", suite, "estimation, waterfill, structure, convergence or all");

  std::string config, out, curve;
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Run the sweep described in a config file");
  sweep->add_option("--config", config, "JSON config")->required();
  sweep->add_option("--out", out, "CSV output path")->required();
  sweep->add_option("--curve", curve, "Optional per-training-length curve CSV");
  sweep->add_flag("--timing", timing, "Record wall time in the ms column");

  std::string metric = "mi", csi = "stat", method = "opt";
  bool bits = false;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario");
  solve_cmd->add_option("--config", config, "JSON config")->required();
  solve_cmd->add_option("--metric", metric, "mi or wmse");
  solve_cmd->add_option("--csi", csi, "stat or est");
  solve_cmd->add_option("--method", method, "opt, uniform or eigapprox");
  solve_cmd->add_flag("--bits", bits, "Report mutual information in bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*validate) return cmd_validate(suite);
    if (*sweep) return cmd_sweep(config, out, curve, timing);
    if (*solve_cmd) return cmd_solve(config, metric, csi, method, bits);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
