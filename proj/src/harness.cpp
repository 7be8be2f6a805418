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

#include "jointopt/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>

namespace jointopt {

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::SnrDb: return "snr_db";
    case SweepVariable::TTrain: return "t_train";
    case SweepVariable::N: return "n";
  }
  return "?";
}

std::string to_string(CsiMode c) { return c == CsiMode::Statistical ? "stat" : "est"; }

std::string to_string(Method m) {
  switch (m) {
    case Method::Optimized: return "opt";
    case Method::UniformPower: return "uniform";
    case Method::EigApprox: return "eigapprox";
  }
  return "?";
}

std::string to_string(MetricKind k) { return k == MetricKind::MI ? "mi" : "wmse"; }

std::optional<SweepVariable> parse_sweep_variable(const std::string& s) {
  if (s == "snr_db") return SweepVariable::SnrDb;
  if (s == "t_train") return SweepVariable::TTrain;
  if (s == "n") return SweepVariable::N;
  return std::nullopt;
}

std::optional<CsiMode> parse_csi_mode(const std::string& s) {
  if (s == "stat") return CsiMode::Statistical;
  if (s == "est") return CsiMode::Estimated;
  return std::nullopt;
}

std::optional<Method> parse_method(const std::string& s) {
  if (s == "opt") return Method::Optimized;
  if (s == "uniform") return Method::UniformPower;
  if (s == "eigapprox") return Method::EigApprox;
  return std::nullopt;
}

std::optional<MetricKind> parse_metric_kind(const std::string& s) {
  if (s == "mi") return MetricKind::MI;
  if (s == "wmse") return MetricKind::WMSE;
  return std::nullopt;
}

void check_method(CsiMode csi, Method method) {
  if (method == Method::EigApprox && csi == CsiMode::Statistical) {
    throw ConfigError("method eigapprox requires estimated CSI");
  }
  if (method == Method::Optimized && csi == CsiMode::Estimated) {
    throw ConfigError("estimated CSI supports methods uniform and eigapprox");
  }
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep values must be nonempty");
  for (std::size_t k = 1; k < values.size(); ++k)
    if (!(values[k] > values[k - 1])) throw ConfigError("sweep values must be strictly increasing");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
    if (variable != SweepVariable::SnrDb && (v != std::round(v) || v < 1)) {
      throw ConfigError("sweep values for " + to_string(variable) + " must be positive integers");
    }
  }
  check_method(csi_mode, method);
  if (csi_mode == CsiMode::Estimated) mc.validate();
}

SolveOutcome solve(const ScenarioConfig& cfg, const Metric& metric, CsiMode csi, Method method, const McConfig& mc,
                   TrainingRange range) {
  check_method(csi, method);
  const auto model = CorrelatedChannelModel::from_config(cfg);
  SolveOutcome out;
  if (csi == CsiMode::Statistical) {
    if (method == Method::Optimized) {
      AlternatingOptions opts;
      opts.range = range;
      out.solution = solve_joint_statistical(cfg, model, metric, opts);
    } else {
      out.solution = uniform_statistical(cfg, model, metric, range);
    }
    out.objective = out.solution.objective;
    out.flagged = out.solution.status == SolveStatus::MaxIters;
    return out;
  }
  if (method == Method::UniformPower) {
    out.solution = solve_uniform_training(cfg, model, metric, mc, range);
    out.objective = out.solution.objective;
    out.objective_se = out.solution.objective_se;
    return out;
  }
  EigApproxOptions opts;
  opts.range = range;
  EigApproxSolution e = solve_eig_approx(cfg, model, metric, mc, opts);
  out.solution = std::move(e.solution);
  out.objective = e.validated->mean;
  out.objective_se = e.validated->std_error;
  out.flagged = !e.pg_converged || out.solution.status == SolveStatus::MaxIters;
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ScenarioConfig& base) {
  spec.validate();
  std::vector<SweepRow> rows;
  rows.reserve(spec.values.size());
  for (double v : spec.values) {
    ScenarioConfig cfg = base;
    TrainingRange range = spec.range;
    Metric metric = spec.metric;
    switch (spec.variable) {
      case SweepVariable::SnrDb:
        cfg.set_snr_db(v);
        break;
      case SweepVariable::TTrain:
        range.lo = range.hi = static_cast<int>(v);
        if (range.lo < cfg.n_data || range.lo > cfg.coherence_time - 1) {
          throw ConfigError("training length " + format_number(v) + " outside [n_data, T-1]");
        }
        break;
      case SweepVariable::N:
        cfg.n_tx = cfg.n_rx = cfg.n_data = static_cast<int>(v);
        break;
    }
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const SolveOutcome r = solve(cfg, metric, spec.csi_mode, spec.method, spec.mc, range);
    const auto stop = std::chrono::steady_clock::now();
    SweepRow row;
    row.variable = v;
    row.objective_mean = r.objective;
    row.objective_se = r.objective_se;
    row.t_train = r.solution.t_train;
    row.iters = r.solution.iterations;
    row.ms = std::chrono::duration<double, std::milli>(stop - start).count();
    row.curve = r.solution.curve;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows, bool timing) {
  const char* unit = spec.metric.kind == MetricKind::MI ? "effective MI, nats per symbol" : "effective weighted MSE";
  os << "# variable: " << to_string(spec.variable) << (spec.variable == SweepVariable::SnrDb ? " (dB)" : "")
     << "; objective: " << unit << "; csi: " << to_string(spec.csi_mode) << "; method: " << to_string(spec.method)
     << "; t_train: symbols; ms: wall time in milliseconds\n";
  os << "variable,objective_mean,objective_se,t_train,iters,ms\n";
  for (const auto& r : rows) {
    os << format_number(r.variable) << ',' << format_number(r.objective_mean) << ','
       << format_number(r.objective_se) << ',' << r.t_train << ',' << r.iters << ','
       << (timing ? format_number(std::round(r.ms * 1000.0) / 1000.0) : std::string("0")) << '\n';
  }
}

void write_curves_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "variable,t_train,objective,objective_se\n";
  for (const auto& r : rows)
    for (const auto& c : r.curve)
      os << format_number(r.variable) << ',' << c.t_train << ',' << format_number(c.objective) << ','
         << format_number(c.std_error) << '\n';
}

}  // namespace jointopt
