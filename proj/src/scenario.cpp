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

#include "jointopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jointopt/linalg.hpp"

namespace jointopt {

void ScenarioConfig::validate() const {
  if (n_tx < 1 || n_rx < 1 || n_data < 1) throw ConfigError("antenna and stream counts must be positive");
  if (n_data > std::min(n_tx, n_rx)) throw ConfigError("n_data must not exceed min(n_tx, n_rx)");
  if (coherence_time < 2) throw ConfigError("coherence_time must be at least 2");
  if (!(train_power > 0.0) || !(data_power_cap > 0.0)) throw ConfigError("powers must be positive");
  if (!(total_energy > train_power)) throw ConfigError("total_energy must exceed train_power");
  if (!(noise_var > 0.0)) throw ConfigError("noise_var must be positive");
  if (train_noise_var && !(*train_noise_var > 0.0)) throw ConfigError("train_noise_var must be positive");
  if (!(corr_theta >= 0.0 && corr_theta < 1.0)) throw ConfigError("corr_theta must lie in [0, 1)");
  if (train_noise_cov) {
    const CMatrix& r = *train_noise_cov;
    if (r.rows() != r.cols() || r.rows() == 0) throw ConfigError("train_noise_cov must be square");
    if (!is_hermitian(r)) throw ConfigError("train_noise_cov must be Hermitian");
    const double lo = min_eigenvalue(r);
    const double hi = sorted_evd(r).values(0);
    if (!(lo > 1e-12 * hi)) throw ConfigError("train_noise_cov must be positive definite");
  }
}

CMatrix ScenarioConfig::training_noise_covariance(int t_train) const {
  if (train_noise_cov) {
    if (train_noise_cov->rows() != t_train) {
      throw DimensionError("train_noise_cov size " + std::to_string(train_noise_cov->rows()) +
                           " does not match t_train " + std::to_string(t_train));
    }
    return *train_noise_cov;
  }
  return CMatrix::Identity(t_train, t_train) * training_noise_variance();
}

void ScenarioConfig::set_snr_db(double snr) {
  noise_var = data_power_cap / std::pow(10.0, snr / 10.0);
  train_noise_var.reset();
}

double ScenarioConfig::snr_db() const { return 10.0 * std::log10(data_power_cap / noise_var); }

PhaseBudget phase_budget(const ScenarioConfig& cfg, int t_train) {
  PhaseBudget b;
  b.t_train = t_train;
  if (t_train < 1 || t_train > cfg.coherence_time - 1) return b;
  b.train_energy = cfg.train_power * t_train;
  const double data_symbols = static_cast<double>(cfg.coherence_time - t_train);
  if (cfg.data_power_mode == DataPowerMode::Fixed) {
    b.data_power = cfg.data_power_cap;
    b.feasible = data_symbols * b.data_power + b.train_energy <= cfg.total_energy + 1e-9;
  } else {
    b.data_power = std::min(cfg.data_power_cap, (cfg.total_energy - b.train_energy) / data_symbols);
    b.feasible = b.data_power > 0.0;
  }
  return b;
}

std::vector<int> feasible_training_lengths(const ScenarioConfig& cfg, TrainingRange range) {
  const int lo = std::max(range.lo > 0 ? range.lo : cfg.n_data, cfg.n_data);
  const int hi = std::min(range.hi > 0 ? range.hi : cfg.coherence_time - 1, cfg.coherence_time - 1);
  std::vector<int> out;
  for (int t = lo; t <= hi; ++t)
    if (phase_budget(cfg, t).feasible) out.push_back(t);
  return out;
}

}  // namespace jointopt
