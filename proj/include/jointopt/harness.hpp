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

// Sweep driver: dispatches solvers per sweep point and writes CSV output.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jointopt/joint_est_csi.hpp"

namespace jointopt {

enum class SweepVariable { SnrDb, TTrain, N };
enum class CsiMode { Statistical, Estimated };
enum class Method { Optimized, UniformPower, EigApprox };

std::string to_string(SweepVariable v);
std::string to_string(CsiMode c);
std::string to_string(Method m);
std::string to_string(MetricKind k);

/// Parsers accept the CLI spellings (snr_db|t_train|n, stat|est, opt|uniform|eigapprox, mi|wmse).
std::optional<SweepVariable> parse_sweep_variable(const std::string& s);
std::optional<CsiMode> parse_csi_mode(const std::string& s);
std::optional<Method> parse_method(const std::string& s);
std::optional<MetricKind> parse_metric_kind(const std::string& s);

/// Throws ConfigError for method/CSI pairs without a solver.
void check_method(CsiMode csi, Method method);

struct SweepSpec {
  SweepVariable variable = SweepVariable::SnrDb;
  std::vector<double> values;
  Metric metric;
  CsiMode csi_mode = CsiMode::Statistical;
  Method method = Method::Optimized;
  McConfig mc;
  TrainingRange range;

  /// Values nonempty and strictly increasing, method valid for the CSI mode.
  void validate() const;
};

struct SolveOutcome {
  JointSolution solution;
  double objective = 0.0;  // reported value: Monte Carlo re-evaluation for EigApprox
  double objective_se = 0.0;
  bool flagged = false;    // an inner solver hit its iteration cap
};

/// One solver call for the given CSI mode and method.
SolveOutcome solve(const ScenarioConfig& cfg, const Metric& metric, CsiMode csi, Method method, const McConfig& mc,
                   TrainingRange range = {});

struct SweepRow {
  double variable = 0.0;
  double objective_mean = 0.0;
  double objective_se = 0.0;
  int t_train = 0;
  int iters = 0;
  double ms = 0.0;
  std::vector<CurvePoint> curve;
};

/// Applies each sweep value to a copy of cfg and solves. Rows follow spec.values.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ScenarioConfig& cfg);

/// CSV with a units comment line, then the header
/// variable,objective_mean,objective_se,t_train,iters,ms. Without timing the
/// ms column is written as 0 so repeated runs are byte-identical.
void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows, bool timing);

/// Long-format per-training-length curves: variable,t_train,objective,objective_se.
void write_curves_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form used in all CSV output.
std::string format_number(double v);

}  // namespace jointopt
