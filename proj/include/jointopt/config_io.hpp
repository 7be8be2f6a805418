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

// JSON run configuration. Every section is optional; unknown keys are errors.
//
//   {
//     "scenario": { "n_tx": 8, "n_rx": 8, "n_data": 8, "coherence_time": 256,
//                   "train_power": 0.1, "data_power_cap": 1.0,
//                   "data_power_mode": "fixed" | "derived", "total_energy": 256,
//                   "noise_var": 0.1 | "snr_db": 10, "train_noise_var": 0.1,
//                   "train_noise_cov": [[...], ...], "corr_theta": 0.9, "rng_seed": 1 },
//     "metric":   { "kind": "mi" | "wmse", "weights": [...] },
//     "mc":       { "n_trials": 10000, "seed": 1, "active_set_tol": 1e-12 },
//     "search":   { "t_min": 8, "t_max": 255 },
//     "sweep":    { "variable": "snr_db" | "t_train" | "n", "values": [...],
//                   "csi": "stat" | "est", "method": "opt" | "uniform" | "eigapprox" }
//   }

#pragma once

#include <optional>
#include <string>

#include "jointopt/harness.hpp"

namespace jointopt {

struct RunConfig {
  ScenarioConfig scenario;
  Metric metric;
  McConfig mc;
  TrainingRange range;
  std::optional<SweepSpec> sweep;  // metric, mc and range copied in
};

/// Throws ConfigError on malformed JSON, unknown keys, wrong types or invalid values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace jointopt
