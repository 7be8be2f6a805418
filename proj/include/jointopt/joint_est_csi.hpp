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

// Joint design with estimated CSI at the transmitter. Objectives are
// expectations over the white channel H_W, estimated by Monte Carlo with
// per-trial seeded draws shared across training lengths.

#pragma once

#include <cstdint>
#include <optional>

#include "jointopt/joint_stat_csi.hpp"

namespace jointopt {

struct McConfig {
  int n_trials = 10000;
  std::uint64_t seed = 1;
  double active_set_tol = 1e-12;  // eigenvalues at or below tol * largest are treated as zero

  /// Enforces n_trials >= 100 for configured runs.
  void validate() const;
};

struct SigmaSpectrum {
  RVector lambda_sigma;
};

SigmaSpectrum sigma_spectrum(const DirectionSystem& sys, const RVector& x_powers);
/// Uses P_D = data_power_cap and the white training noise of cfg.
SigmaSpectrum sigma_spectrum(const RVector& x_powers, const CorrelatedChannelModel& model, const ScenarioConfig& cfg);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// H_W^H H_W for every trial, drawn once and reused so that objectives at
/// different training lengths see identical channels.
class GramBank {
 public:
  GramBank(int n_rx, int n_dirs, const McConfig& mc);
  int n_trials() const { return static_cast<int>(grams_.size()); }
  int n_dirs() const { return n_dirs_; }
  const CMatrix& gram(int trial) const { return grams_[static_cast<std::size_t>(trial)]; }
  double active_set_tol() const { return tol_; }

 private:
  int n_dirs_;
  double tol_;
  std::vector<CMatrix> grams_;
};

/// Sample mean of the water-filled sum log(1 + f_i^2 lambda_i) over the bank,
/// where lambda are the eigenvalues of Lambda^{1/2} H_W^H H_W Lambda^{1/2}.
McEstimate mc_effective_mi(const SigmaSpectrum& spectrum, double p_d, const GramBank& bank);
/// Same for the water-filled weighted MSE; weights pair with eigenvalues strongest first.
McEstimate mc_effective_wmse(const SigmaSpectrum& spectrum, const RVector& weights, double p_d,
                             const GramBank& bank);

McEstimate mc_effective_mi(const SigmaSpectrum& spectrum, const ScenarioConfig& cfg, const McConfig& mc);
McEstimate mc_effective_wmse(const SigmaSpectrum& spectrum, const RVector& weights, const ScenarioConfig& cfg,
                             const McConfig& mc);

/// Effective Monte Carlo objective (scaled by the training overhead) for x at t_train.
McEstimate mc_effective_objective(const DirectionSystem& sys, const Metric& metric, const RVector& x_powers,
                                  int t_train, int coherence_time, const GramBank& bank);

/// Uniform training powers, one-dimensional search over the training length.
JointSolution solve_uniform_training(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                     const Metric& metric, const McConfig& mc, TrainingRange range = {});

struct EigApproxOptions {
  double rel_tol = 1e-8;
  int max_outer = 50;
  int max_pg_iters = 500;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  TrainingRange range;
};

struct EigApproxSolution {
  JointSolution solution;  // objective is the approximated (deterministic) value
  std::optional<McEstimate> validated;  // full Monte Carlo re-evaluation at the chosen design
  bool pg_converged = true;
};

/// Replaces the random eigenvalues by N_R Lambda_Sigma and alternates exact
/// f water-filling with projected-gradient steps on x.
EigApproxSolution solve_eig_approx(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                   const Metric& metric, const std::optional<McConfig>& mc_validation = std::nullopt,
                                   const EigApproxOptions& opts = {});

/// Euclidean projection onto {x >= 0, sum x <= budget}.
RVector project_capped_simplex(const RVector& v, double budget);

}  // namespace jointopt
