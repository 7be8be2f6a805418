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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jointopt/types.hpp"

namespace jointopt {

/// How the data-phase power P_D is set for a given training length.
enum class DataPowerMode {
  Fixed,    // P_D = data_power_cap; training lengths violating the energy budget are infeasible
  Derived,  // P_D = min(cap, (E_total - P_T T_T) / (T - T_T))
};

/// All system constants of one link scenario.
struct ScenarioConfig {
  int n_tx = 8;
  int n_rx = 8;
  int n_data = 8;
  int coherence_time = 256;  // T, symbols per coherence block
  double train_power = 0.1;  // P_T, per-symbol training power
  double data_power_cap = 1.0;
  DataPowerMode data_power_mode = DataPowerMode::Fixed;
  double total_energy = 256.0;  // E_total
  double noise_var = 0.1;       // sigma_N^2, data phase
  /// White training noise variance; defaults to noise_var when unset.
  std::optional<double> train_noise_var;
  /// Full training-noise covariance R_N (T_T x T_T). Overrides train_noise_var.
  std::optional<CMatrix> train_noise_cov;
  double corr_theta = 0.9;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  bool white_training_noise() const { return !train_noise_cov.has_value(); }
  double training_noise_variance() const { return train_noise_var.value_or(noise_var); }

  /// R_N for a given training length: the explicit matrix (whose size must
  /// equal t_train) or sigma^2 I.
  CMatrix training_noise_covariance(int t_train) const;

  /// Sets sigma_N^2 = P_D / 10^(snr/10) and makes training noise follow it.
  void set_snr_db(double snr_db);
  double snr_db() const;
};

/// Resources of one training-length candidate.
struct PhaseBudget {
  int t_train = 0;
  double train_energy = 0.0;  // P_T * T_T, cap on sum of x_i^2
  double data_power = 0.0;    // P_D in effect
  bool feasible = false;
};

PhaseBudget phase_budget(const ScenarioConfig& cfg, int t_train);

/// Inclusive training-length window for the 1-D search.
struct TrainingRange {
  int lo = 0;  // 0 means N_Data
  int hi = 0;  // 0 means T - 1
};

/// Feasible T_T values in [max(lo, N_Data), min(hi, T-1)], ascending.
std::vector<int> feasible_training_lengths(const ScenarioConfig& cfg, TrainingRange range = {});

}  // namespace jointopt
