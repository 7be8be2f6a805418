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

#include "jointopt/joint_stat_csi.hpp"

#include <cmath>

#include "jointopt/parallel.hpp"

namespace jointopt {

bool better(const Metric& metric, double a, double b) { return metric.maximize() ? a > b : a < b; }

double statistical_objective(const DirectionSystem& sys, const Metric& metric, const RVector& x_powers,
                             const RVector& f_powers, int t_train, int coherence_time) {
  return effective_objective(metric, sys.gains(x_powers), f_powers, t_train, coherence_time);
}

namespace {

void require_white_noise(const ScenarioConfig& cfg) {
  if (!cfg.white_training_noise()) {
    throw ConfigError("joint solvers need white training noise; train_noise_cov is fixed to one training length");
  }
}

RVector update_f(const DirectionSystem& sys, const Metric& metric, const RVector& x, const RVector& f) {
  const RVector h = sys.gains(x);
  const Allocation a = metric.kind == MetricKind::MI ? waterfill_f_mi(h, sys.p_d)
                                                     : waterfill_f_wmse(h, metric.weights_for(sys.size()), sys.p_d);
  return a.degenerate ? f : a.powers;
}

RVector update_x(const DirectionSystem& sys, const Metric& metric, const RVector& x, const RVector& f,
                 double budget) {
  const auto params = sys.params(f, x);
  const Allocation a = metric.kind == MetricKind::MI
                           ? waterfill_x_mi(params, budget)
                           : waterfill_x_wmse(params, metric.weights_for(sys.size()), budget);
  return a.degenerate ? x : a.powers;
}

}  // namespace

JointSolution pick_best_length(const Metric& metric, std::vector<JointSolution>& candidates) {
  if (candidates.empty()) throw ConfigError("no feasible training length under the energy budget");
  std::size_t best = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k)
    if (better(metric, candidates[k].objective, candidates[best].objective) ||
        (candidates[k].objective == candidates[best].objective && candidates[k].t_train < candidates[best].t_train)) {
      best = k;
    }
  JointSolution out = std::move(candidates[best]);
  out.curve.clear();
  for (const auto& c : candidates) out.curve.push_back({c.t_train, c.objective, c.objective_se});
  return out;
}

namespace {

std::vector<JointSolution> evaluate_lengths(const std::vector<int>& lengths,
                                            const std::function<JointSolution(int)>& solve_one) {
  std::vector<JointSolution> out(lengths.size());
  parallel_chunks(lengths.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) out[k] = solve_one(lengths[k]);
  });
  return out;
}

}  // namespace

JointSolution solve_at_training_length(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                       const Metric& metric, int t_train, const AlternatingOptions& opts) {
  cfg.validate();
  require_white_noise(cfg);
  const DirectionSystem sys = DirectionSystem::make(model, cfg, t_train);
  const int n = sys.size();
  const double budget = cfg.train_power * t_train;
  const int big_t = cfg.coherence_time;

  JointSolution s;
  s.t_train = t_train;
  s.data_power = sys.p_d;
  s.x_powers = RVector::Constant(n, budget / n);
  s.f_powers = RVector::Constant(n, sys.p_d / n);
  s.objective = statistical_objective(sys, metric, s.x_powers, s.f_powers, t_train, big_t);
  s.trace.push_back({0, s.objective});
  s.status = SolveStatus::MaxIters;

  for (int it = 1; it <= opts.max_iters; ++it) {
    const RVector f = update_f(sys, metric, s.x_powers, s.f_powers);
    const RVector x = update_x(sys, metric, s.x_powers, f, budget);
    const double obj = statistical_objective(sys, metric, x, f, t_train, big_t);
    const double prev = s.objective;
    // Both updates are exact block optima, so a worse value is rounding noise.
    if (better(metric, prev, obj) && std::abs(obj - prev) > 1e-12 * (1.0 + std::abs(prev))) {
      s.iterations = it;
      s.status = SolveStatus::Converged;
      break;
    }
    s.x_powers = x;
    s.f_powers = f;
    s.objective = obj;
    s.trace.push_back({it, obj});
    s.iterations = it;
    if (std::abs(obj - prev) <= opts.rel_tol * (1.0 + std::abs(obj))) {
      s.status = SolveStatus::Converged;
      break;
    }
  }
  return s;
}

JointSolution solve_joint_statistical(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                      const Metric& metric, const AlternatingOptions& opts) {
  cfg.validate();
  require_white_noise(cfg);
  const auto lengths = feasible_training_lengths(cfg, opts.range);
  auto candidates =
      evaluate_lengths(lengths, [&](int t) { return solve_at_training_length(cfg, model, metric, t, opts); });
  return pick_best_length(metric, candidates);
}

JointSolution uniform_statistical(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                  const Metric& metric, TrainingRange range) {
  cfg.validate();
  require_white_noise(cfg);
  const auto lengths = feasible_training_lengths(cfg, range);
  auto candidates = evaluate_lengths(lengths, [&](int t) {
    const DirectionSystem sys = DirectionSystem::make(model, cfg, t);
    JointSolution s;
    s.t_train = t;
    s.data_power = sys.p_d;
    s.x_powers = RVector::Constant(sys.size(), cfg.train_power * t / sys.size());
    s.f_powers = RVector::Constant(sys.size(), sys.p_d / sys.size());
    s.objective = statistical_objective(sys, metric, s.x_powers, s.f_powers, t, cfg.coherence_time);
    s.trace.push_back({0, s.objective});
    return s;
  });
  return pick_best_length(metric, candidates);
}

}  // namespace jointopt
