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

// Joint training / precoder power allocation with statistical CSI at the
// transmitter: alternating closed-form water-fillings at each training
// length, then a one-dimensional search over the training length.

#pragma once

#include <vector>

#include "jointopt/precoder_structure.hpp"

namespace jointopt {

enum class SolveStatus { Converged, MaxIters };

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
};

struct CurvePoint {
  int t_train = 0;
  double objective = 0.0;
  double std_error = 0.0;
};

struct JointSolution {
  RVector x_powers;  // training power per direction, strongest direction first
  RVector f_powers;  // data (F-tilde) power per direction
  int t_train = 0;
  double data_power = 0.0;  // P_D in effect at t_train
  double objective = 0.0;
  double objective_se = 0.0;  // Monte Carlo standard error, 0 for deterministic objectives
  std::vector<TracePoint> trace;
  SolveStatus status = SolveStatus::Converged;
  int iterations = 0;
  std::vector<CurvePoint> curve;  // best objective at every evaluated training length
};

struct AlternatingOptions {
  double rel_tol = 1e-8;
  int max_iters = 50;
  TrainingRange range;
};

/// Deterministic effective objective of the statistical-CSI problem.
double statistical_objective(const DirectionSystem& sys, const Metric& metric, const RVector& x_powers,
                             const RVector& f_powers, int t_train, int coherence_time);

/// Alternating water-filling at one training length, from uniform powers.
JointSolution solve_at_training_length(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                       const Metric& metric, int t_train, const AlternatingOptions& opts = {});

/// Best training length and allocation. Ties go to the shorter training.
JointSolution solve_joint_statistical(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                      const Metric& metric, const AlternatingOptions& opts = {});

/// Uniform x and f at every feasible training length; best one returned.
JointSolution uniform_statistical(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                  const Metric& metric, TrainingRange range = {});

/// True when a is strictly better than b for the metric.
bool better(const Metric& metric, double a, double b);

/// Moves out the best candidate (shortest training on ties) and fills its curve.
/// Throws ConfigError when there are no candidates.
JointSolution pick_best_length(const Metric& metric, std::vector<JointSolution>& candidates);

}  // namespace jointopt
