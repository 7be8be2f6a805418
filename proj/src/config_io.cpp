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

#include "jointopt/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace jointopt {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
void read(const json& obj, const std::string& key, const std::string& where, T& dst) {
  if (obj.contains(key)) dst = get<T>(obj, key, where);
}

CMatrix read_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ConfigError(where + " must be square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError(where + " entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

void read_scenario(const json& j, ScenarioConfig& s) {
  const std::string w = "scenario";
  reject_unknown(j, w,
                 {"n_tx", "n_rx", "n_data", "coherence_time", "train_power", "data_power_cap", "data_power_mode",
                  "total_energy", "noise_var", "snr_db", "train_noise_var", "train_noise_cov", "corr_theta",
                  "rng_seed"});
  read(j, "n_tx", w, s.n_tx);
  read(j, "n_rx", w, s.n_rx);
  read(j, "n_data", w, s.n_data);
  read(j, "coherence_time", w, s.coherence_time);
  read(j, "train_power", w, s.train_power);
  read(j, "data_power_cap", w, s.data_power_cap);
  read(j, "total_energy", w, s.total_energy);
  read(j, "corr_theta", w, s.corr_theta);
  read(j, "rng_seed", w, s.rng_seed);
  if (j.contains("data_power_mode")) {
    const auto mode = get<std::string>(j, "data_power_mode", w);
    if (mode == "fixed") s.data_power_mode = DataPowerMode::Fixed;
    else if (mode == "derived") s.data_power_mode = DataPowerMode::Derived;
    else throw ConfigError("scenario.data_power_mode must be 'fixed' or 'derived'");
  }
  if (j.contains("noise_var") && j.contains("snr_db")) throw ConfigError("scenario: give noise_var or snr_db, not both");
  read(j, "noise_var", w, s.noise_var);
  if (j.contains("snr_db")) s.set_snr_db(get<double>(j, "snr_db", w));
  if (j.contains("train_noise_var")) s.train_noise_var = get<double>(j, "train_noise_var", w);
  if (j.contains("train_noise_cov")) s.train_noise_cov = read_matrix(j.at("train_noise_cov"), "scenario.train_noise_cov");
}

void read_metric(const json& j, Metric& m) {
  reject_unknown(j, "metric", {"kind", "weights"});
  if (j.contains("kind")) {
    const auto k = parse_metric_kind(get<std::string>(j, "kind", "metric"));
    if (!k) throw ConfigError("metric.kind must be 'mi' or 'wmse'");
    m.kind = *k;
  }
  if (j.contains("weights")) {
    const auto w = get<std::vector<double>>(j, "weights", "metric");
    m.weights = Eigen::Map<const RVector>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
}

void read_mc(const json& j, McConfig& mc) {
  reject_unknown(j, "mc", {"n_trials", "seed", "active_set_tol"});
  read(j, "n_trials", "mc", mc.n_trials);
  read(j, "seed", "mc", mc.seed);
  read(j, "active_set_tol", "mc", mc.active_set_tol);
}

void read_search(const json& j, TrainingRange& r) {
  reject_unknown(j, "search", {"t_min", "t_max"});
  read(j, "t_min", "search", r.lo);
  read(j, "t_max", "search", r.hi);
  if (r.lo < 0 || r.hi < 0 || (r.hi > 0 && r.lo > r.hi)) throw ConfigError("search: need 0 < t_min <= t_max");
}

SweepSpec read_sweep(const json& j) {
  reject_unknown(j, "sweep", {"variable", "values", "csi", "method"});
  SweepSpec s;
  if (!j.contains("variable") || !j.contains("values")) throw ConfigError("sweep needs 'variable' and 'values'");
  const auto var = parse_sweep_variable(get<std::string>(j, "variable", "sweep"));
  if (!var) throw ConfigError("sweep.variable must be 'snr_db', 't_train' or 'n'");
  s.variable = *var;
  s.values = get<std::vector<double>>(j, "values", "sweep");
  if (j.contains("csi")) {
    const auto c = parse_csi_mode(get<std::string>(j, "csi", "sweep"));
    if (!c) throw ConfigError("sweep.csi must be 'stat' or 'est'");
    s.csi_mode = *c;
  }
  if (j.contains("method")) {
    const auto m = parse_method(get<std::string>(j, "method", "sweep"));
    if (!m) throw ConfigError("sweep.method must be 'opt', 'uniform' or 'eigapprox'");
    s.method = *m;
  }
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(root, "config", {"scenario", "metric", "mc", "search", "sweep"});
  RunConfig rc;
  if (root.contains("scenario")) read_scenario(root.at("scenario"), rc.scenario);
  rc.mc.seed = rc.scenario.rng_seed;
  if (root.contains("metric")) read_metric(root.at("metric"), rc.metric);
  if (root.contains("mc")) read_mc(root.at("mc"), rc.mc);
  if (root.contains("search")) read_search(root.at("search"), rc.range);
  rc.scenario.validate();
  rc.mc.validate();
  if (root.contains("sweep")) {
    SweepSpec s = read_sweep(root.at("sweep"));
    s.metric = rc.metric;
    s.mc = rc.mc;
    s.range = rc.range;
    s.validate();
    rc.sweep = std::move(s);
  }
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace jointopt
