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

#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "jointopt/config_io.hpp"
#include "jointopt/parallel.hpp"
#include "jointopt/validation.hpp"

using namespace jointopt;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::string sweep_csv(const SweepSpec& spec, const ScenarioConfig& cfg) {
  std::ostringstream os;
  write_sweep_csv(os, spec, run_sweep(spec, cfg), false);
  return os.str();
}

struct ThreadOverride {
  explicit ThreadOverride(std::size_t n) { set_thread_count(n); }
  ~ThreadOverride() { set_thread_count(0); }
};

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("empty object keeps the defaults") {
    const RunConfig rc = parse_config("{}");
    CHECK(rc.scenario.n_tx == 8);
    CHECK(rc.scenario.coherence_time == 256);
    CHECK(rc.scenario.corr_theta == 0.9);
    CHECK(rc.mc.n_trials == 10000);
    CHECK_FALSE(rc.sweep.has_value());
  }
  SUBCASE("full document") {
    const RunConfig rc = parse_config(R"({
      "scenario": {"n_tx": 4, "n_rx": 4, "n_data": 4, "coherence_time": 64, "snr_db": 20,
                   "data_power_mode": "derived", "total_energy": 60, "rng_seed": 7},
      "metric": {"kind": "wmse", "weights": [2, 1, 1, 1]},
      "mc": {"n_trials": 500},
      "search": {"t_min": 4, "t_max": 40},
      "sweep": {"variable": "snr_db", "values": [0, 10], "csi": "est", "method": "uniform"}
    })");
    CHECK(rc.scenario.n_tx == 4);
    CHECK(rc.scenario.noise_var == doctest::Approx(0.01));
    CHECK(rc.scenario.data_power_mode == DataPowerMode::Derived);
    CHECK(rc.metric.kind == MetricKind::WMSE);
    CHECK(rc.metric.weights.size() == 4);
    CHECK(rc.mc.n_trials == 500);
    CHECK(rc.mc.seed == 7);
    CHECK(rc.range.lo == 4);
    CHECK(rc.range.hi == 40);
    REQUIRE(rc.sweep.has_value());
    CHECK(rc.sweep->csi_mode == CsiMode::Estimated);
    CHECK(rc.sweep->method == Method::UniformPower);
    CHECK(rc.sweep->mc.n_trials == 500);
    CHECK(rc.sweep->metric.kind == MetricKind::WMSE);
  }
  SUBCASE("complex training noise covariance") {
    const RunConfig rc = parse_config(R"({"scenario": {"n_tx": 2, "n_rx": 2, "n_data": 2,
      "train_noise_cov": [[1, [0, 0.5]], [[0, -0.5], 1]]}})");
    REQUIRE(rc.scenario.train_noise_cov.has_value());
    CHECK(rc.scenario.train_noise_cov->coeff(0, 1) == cplx(0.0, 0.5));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"n_tx": 4, "bogus": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"extra": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"n_tx": "four"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"noise_var": 0.1, "snr_db": 10}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"corr_theta": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mc": {"n_trials": 10}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"metric": {"kind": "ber"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"variable": "snr_db", "values": [10, 0]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"variable": "snr_db", "values": []}})"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"sweep": {"variable": "snr_db", "values": [0], "csi": "stat", "method": "eigapprox"}})"),
        ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }
}

TEST_CASE("enum spellings round trip") {
  for (auto v : {SweepVariable::SnrDb, SweepVariable::TTrain, SweepVariable::N})
    CHECK(parse_sweep_variable(to_string(v)) == v);
  for (auto c : {CsiMode::Statistical, CsiMode::Estimated}) CHECK(parse_csi_mode(to_string(c)) == c);
  for (auto m : {Method::Optimized, Method::UniformPower, Method::EigApprox}) CHECK(parse_method(to_string(m)) == m);
  for (auto k : {MetricKind::MI, MetricKind::WMSE}) CHECK(parse_metric_kind(to_string(k)) == k);
  CHECK_FALSE(parse_method("best").has_value());
  for (auto s : {Suite::Estimation, Suite::WaterfillOracles, Suite::StructureChecks, Suite::Convergence})
    CHECK(parse_suite(to_string(s)) == s);
}

TEST_CASE("method and CSI pairing") {
  CHECK_THROWS_AS(check_method(CsiMode::Statistical, Method::EigApprox), ConfigError);
  CHECK_THROWS_AS(check_method(CsiMode::Estimated, Method::Optimized), ConfigError);
  CHECK_NOTHROW(check_method(CsiMode::Statistical, Method::Optimized));
  CHECK_NOTHROW(check_method(CsiMode::Statistical, Method::UniformPower));
  CHECK_NOTHROW(check_method(CsiMode::Estimated, Method::UniformPower));
  CHECK_NOTHROW(check_method(CsiMode::Estimated, Method::EigApprox));
  SweepSpec spec;
  spec.values = {0.0};
  spec.csi_mode = CsiMode::Statistical;
  spec.method = Method::EigApprox;
  CHECK_THROWS_AS(run_sweep(spec, ScenarioConfig{}), ConfigError);
}

TEST_CASE("statistical MI grows with SNR") {
  SweepSpec spec;
  spec.values = {0.0, 10.0, 20.0, 30.0};
  const ScenarioConfig cfg;
  const auto rows = run_sweep(spec, cfg);
  REQUIRE(rows.size() == 4);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].variable == spec.values[k]);
    CHECK(rows[k].objective_se == 0.0);
    CHECK((cfg.coherence_time - rows[k].t_train) * cfg.data_power_cap + cfg.train_power * rows[k].t_train <=
          cfg.total_energy + 1e-9);
    if (k > 0) CHECK(rows[k].objective_mean >= rows[k - 1].objective_mean);
  }
}

TEST_CASE("training-length sweep with estimated CSI peaks inside") {
  SweepSpec spec;
  spec.variable = SweepVariable::TTrain;
  spec.values = {8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 255};
  spec.csi_mode = CsiMode::Estimated;
  spec.method = Method::UniformPower;
  spec.mc = {300, 5};
  ScenarioConfig cfg;
  cfg.set_snr_db(30.0);
  const auto rows = run_sweep(spec, cfg);
  const auto peak = std::max_element(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.objective_mean < b.objective_mean;
  });
  CHECK(peak != rows.begin());
  CHECK(peak != rows.end() - 1);
  for (auto it = rows.begin(); it != peak; ++it) CHECK(it->objective_mean < (it + 1)->objective_mean);
  for (auto it = peak; it + 1 != rows.end(); ++it) CHECK(it->objective_mean > (it + 1)->objective_mean);
  for (const SweepRow& r : rows) {
    CHECK(r.t_train == static_cast<int>(r.variable));
    CHECK(r.objective_se > 0.0);
  }
}

TEST_CASE("antenna-count sweep") {
  SweepSpec spec;
  spec.variable = SweepVariable::N;
  spec.values = {2, 4};
  const auto rows = run_sweep(spec, ScenarioConfig{});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].objective_mean > rows[0].objective_mean);
  CHECK(rows[0].t_train >= 2);
}

TEST_CASE("CSV layout") {
  CHECK(format_number(10.0) == "10");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.5) == "-2.5");
  SweepSpec spec;
  spec.values = {0.0, 10.0};
  std::vector<SweepRow> rows(2);
  rows[0] = {0.0, 1.25, 0.0, 12, 3, 4.5, {}};
  rows[1] = {10.0, 2.5, 0.0, 9, 2, 7.25, {{9, 2.5, 0.0}}};
  std::ostringstream plain, timed, curves;
  write_sweep_csv(plain, spec, rows, false);
  write_sweep_csv(timed, spec, rows, true);
  write_curves_csv(curves, rows);
  const auto p = lines_of(plain.str());
  REQUIRE(p.size() == 4);
  CHECK(p[0].rfind("# ", 0) == 0);
  CHECK(p[1] == "variable,objective_mean,objective_se,t_train,iters,ms");
  CHECK(p[2] == "0,1.25,0,12,3,0");
  CHECK(p[3] == "10,2.5,0,9,2,0");
  CHECK(lines_of(timed.str())[3] == "10,2.5,0,9,2,7.25");
  const auto c = lines_of(curves.str());
  REQUIRE(c.size() == 2);
  CHECK(c[0] == "variable,t_train,objective,objective_se");
  CHECK(c[1] == "10,9,2.5,0");
}

TEST_CASE("sweep output does not depend on the thread count") {
  SweepSpec spec;
  spec.values = {0.0, 20.0};
  spec.csi_mode = CsiMode::Estimated;
  spec.method = Method::EigApprox;
  spec.mc = {200, 3};
  spec.range = {4, 40};
  ScenarioConfig cfg;
  cfg.n_tx = cfg.n_rx = cfg.n_data = 4;
  std::string one, many;
  {
    ThreadOverride t(1);
    one = sweep_csv(spec, cfg);
  }
  {
    ThreadOverride t(8);
    many = sweep_csv(spec, cfg);
  }
  CHECK(one == many);
  CHECK(one == sweep_csv(spec, cfg));
}

TEST_CASE("validation suites") {
  for (auto s : {Suite::Estimation, Suite::WaterfillOracles, Suite::StructureChecks, Suite::Convergence}) {
    const ValidationReport r = run_validation(s);
    CAPTURE(to_string(s));
    CHECK_FALSE(r.checks.empty());
    CHECK(r.passed());
    for (const CheckResult& c : r.checks) {
      CAPTURE(c.property);
      CHECK(c.residual <= c.threshold);
    }
  }
  ValidationReport fake;
  fake.checks.push_back({"waterfill", "budget", 2.0, 1.0, false});
  CHECK_FALSE(fake.passed());
  std::ostringstream os;
  write_report(os, fake);
  const auto l = lines_of(os.str());
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "suite,property,residual,threshold,verdict");
  CHECK(l[1] == "waterfill,budget,2,1,FAIL");
}
