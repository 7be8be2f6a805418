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

#include "jointopt/joint_est_csi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "jointopt/parallel.hpp"
#include "jointopt/rng.hpp"

namespace jointopt {

void McConfig::validate() const {
  if (n_trials < 100) throw ConfigError("mc.n_trials must be at least 100");
  if (!(active_set_tol >= 0.0)) throw ConfigError("mc.active_set_tol must be nonnegative");
}

SigmaSpectrum sigma_spectrum(const DirectionSystem& sys, const RVector& x_powers) {
  if ((x_powers.array() < 0.0).any()) throw DomainError("sigma_spectrum: negative training power");
  return {sys.lambda_sigma(x_powers)};
}

SigmaSpectrum sigma_spectrum(const RVector& x_powers, const CorrelatedChannelModel& model, const ScenarioConfig& cfg) {
  DirectionSystem sys;
  const auto n = x_powers.size();
  if (n > model.n_tx()) throw DimensionError("sigma_spectrum: more directions than transmit antennas");
  sys.psi = model.psi_evals().head(n);
  sys.sigma2 = RVector::Constant(n, cfg.training_noise_variance());
  sys.n_rx = cfg.n_rx;
  sys.noise_var = cfg.noise_var;
  sys.p_d = cfg.data_power_cap;
  return sigma_spectrum(sys, x_powers);
}

GramBank::GramBank(int n_rx, int n_dirs, const McConfig& mc) : n_dirs_(n_dirs), tol_(mc.active_set_tol) {
  if (n_rx < 1 || n_dirs < 1) throw DomainError("GramBank: dimensions must be positive");
  if (mc.n_trials < 1) throw DomainError("GramBank: n_trials must be positive");
  grams_.resize(static_cast<std::size_t>(mc.n_trials));
  parallel_chunks(grams_.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      Rng rng(mc.seed, k);
      const CMatrix hw = rng.complex_gaussian(n_rx, n_dirs);
      grams_[k] = symmetrize(hw.adjoint() * hw);
    }
  });
}

namespace {

McEstimate summarize(const std::vector<double>& samples) {
  McEstimate e;
  const double n = static_cast<double>(samples.size());
  e.mean = pairwise_sum(samples) / n;
  if (samples.size() < 2) return e;
  std::vector<double> dev(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) dev[k] = (samples[k] - e.mean) * (samples[k] - e.mean);
  e.std_error = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
  return e;
}

// Per-trial objective from the descending eigenvalues of the scaled Gram matrix.
McEstimate run_trials(const SigmaSpectrum& spectrum, const GramBank& bank,
                      const std::function<double(const RVector&)>& per_trial) {
  const RVector& ls = spectrum.lambda_sigma;
  if (ls.size() != bank.n_dirs()) throw DimensionError("spectrum length does not match the Gram bank");
  if ((ls.array() < 0.0).any() || !ls.allFinite()) throw DomainError("spectrum entries must be finite and nonnegative");
  const Eigen::Index n = ls.size();
  const RVector d = ls.cwiseSqrt();
  std::vector<double> samples(static_cast<std::size_t>(bank.n_trials()));
  parallel_chunks(samples.size(), [&](std::size_t lo, std::size_t hi) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(n);
    CMatrix m(n, n);
    RVector eig(n);
    for (std::size_t k = lo; k < hi; ++k) {
      const CMatrix& g = bank.gram(static_cast<int>(k));
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = g(i, j) * (d(i) * d(j));
      es.compute(m, Eigen::EigenvaluesOnly);
      const RVector& asc = es.eigenvalues();
      for (Eigen::Index i = 0; i < n; ++i) eig(i) = asc(n - 1 - i);
      const double floor = bank.active_set_tol() * std::max(eig(0), 0.0);
      for (Eigen::Index i = 0; i < n; ++i)
        if (eig(i) <= floor) eig(i) = 0.0;
      samples[k] = per_trial(eig);
    }
  });
  return summarize(samples);
}

}  // namespace

McEstimate mc_effective_mi(const SigmaSpectrum& spectrum, double p_d, const GramBank& bank) {
  return run_trials(spectrum, bank, [&](const RVector& eig) { return waterfill_mi_exact(eig, p_d).objective; });
}

McEstimate mc_effective_wmse(const SigmaSpectrum& spectrum, const RVector& weights, double p_d,
                             const GramBank& bank) {
  if (weights.size() != spectrum.lambda_sigma.size()) throw DimensionError("mc_effective_wmse: weights length");
  const RVector w = Metric::wmse(weights).weights_for(static_cast<int>(weights.size()));
  return run_trials(spectrum, bank, [&](const RVector& eig) { return waterfill_wmse_exact(eig, w, p_d).objective; });
}

McEstimate mc_effective_mi(const SigmaSpectrum& spectrum, const ScenarioConfig& cfg, const McConfig& mc) {
  const GramBank bank(cfg.n_rx, static_cast<int>(spectrum.lambda_sigma.size()), mc);
  return mc_effective_mi(spectrum, cfg.data_power_cap, bank);
}

McEstimate mc_effective_wmse(const SigmaSpectrum& spectrum, const RVector& weights, const ScenarioConfig& cfg,
                             const McConfig& mc) {
  const GramBank bank(cfg.n_rx, static_cast<int>(spectrum.lambda_sigma.size()), mc);
  return mc_effective_wmse(spectrum, weights, cfg.data_power_cap, bank);
}

McEstimate mc_effective_objective(const DirectionSystem& sys, const Metric& metric, const RVector& x_powers,
                                  int t_train, int coherence_time, const GramBank& bank) {
  if (t_train < 1 || t_train > coherence_time - 1) throw DomainError("training length outside [1, T-1]");
  const SigmaSpectrum spectrum = sigma_spectrum(sys, x_powers);
  McEstimate e;
  double scale = 0.0;
  if (metric.kind == MetricKind::MI) {
    e = mc_effective_mi(spectrum, sys.p_d, bank);
    scale = static_cast<double>(coherence_time - t_train) / coherence_time;
  } else {
    e = mc_effective_wmse(spectrum, metric.weights_for(sys.size()), sys.p_d, bank);
    scale = static_cast<double>(coherence_time) / (coherence_time - t_train);
  }
  return {e.mean * scale, e.std_error * scale};
}

namespace {

void require_white_noise(const ScenarioConfig& cfg) {
  if (!cfg.white_training_noise()) {
    throw ConfigError("joint solvers need white training noise; train_noise_cov is fixed to one training length");
  }
}

RVector exact_f(const DirectionSystem& sys, const Metric& metric, const RVector& gains) {
  return metric.kind == MetricKind::MI ? waterfill_mi_exact(gains, sys.p_d).powers
                                       : waterfill_wmse_exact(gains, metric.weights_for(sys.size()), sys.p_d).powers;
}

}  // namespace

JointSolution solve_uniform_training(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                     const Metric& metric, const McConfig& mc, TrainingRange range) {
  cfg.validate();
  require_white_noise(cfg);
  const auto lengths = feasible_training_lengths(cfg, range);
  if (lengths.empty()) throw ConfigError("no feasible training length under the energy budget");
  const GramBank bank(cfg.n_rx, cfg.n_data, mc);
  std::vector<JointSolution> candidates;
  candidates.reserve(lengths.size());
  for (int t : lengths) {
    const DirectionSystem sys = DirectionSystem::make(model, cfg, t);
    JointSolution s;
    s.t_train = t;
    s.data_power = sys.p_d;
    s.x_powers = RVector::Constant(sys.size(), cfg.train_power * t / sys.size());
    s.f_powers = exact_f(sys, metric, sys.gains(s.x_powers));
    const McEstimate e = mc_effective_objective(sys, metric, s.x_powers, t, cfg.coherence_time, bank);
    s.objective = e.mean;
    s.objective_se = e.std_error;
    s.trace.push_back({0, e.mean});
    candidates.push_back(std::move(s));
  }
  return pick_best_length(metric, candidates);
}

RVector project_capped_simplex(const RVector& v, double budget) {
  if (!(budget >= 0.0)) throw DomainError("project_capped_simplex: budget must be nonnegative");
  RVector clipped = v.cwiseMax(0.0);
  if (clipped.sum() <= budget) return clipped;
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - budget) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

namespace {

struct PgResult {
  RVector x;
  bool converged = false;
};

// Signed gradient (ascent direction) of the effective objective in x at fixed f.
RVector ascent_gradient(const DirectionSystem& sys, const Metric& metric, const RVector& x, const RVector& f,
                        int t_train, int big_t) {
  const auto params = sys.params(f, x);
  const RVector w = metric.kind == MetricKind::MI ? RVector::Ones(sys.size()) : metric.weights_for(sys.size());
  RVector g(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    const auto& p = params[static_cast<std::size_t>(i)];
    const double grow = p.c + (p.a + p.b) * x(i);
    if (metric.kind == MetricKind::MI) {
      g(i) = p.a * p.c / (grow * (p.c + p.b * x(i))) * (big_t - t_train) / big_t;
    } else {
      g(i) = w(i) * p.a * p.c / (grow * grow) * big_t / (big_t - t_train);
    }
  }
  return g;
}

PgResult projected_gradient(const DirectionSystem& sys, const Metric& metric, RVector x, const RVector& f,
                            double budget, int t_train, int big_t, const EigApproxOptions& opts) {
  const double sign = metric.maximize() ? 1.0 : -1.0;
  auto value = [&](const RVector& y) { return sign * statistical_objective(sys, metric, y, f, t_train, big_t); };
  PgResult r;
  double cur = value(x);
  double step = 0.0;
  RVector prev_x, prev_g;
  for (int it = 0; it < opts.max_pg_iters; ++it) {
    const RVector g = ascent_gradient(sys, metric, x, f, t_train, big_t);
    const double gmax = g.cwiseAbs().maxCoeff();
    if (!(gmax > 0.0)) {
      r.converged = true;
      break;
    }
    // Barzilai-Borwein trial step; the objective is concave in x, so s'y < 0.
    double trial = step > 0.0 ? step * 2.0 : budget / gmax;
    if (it > 0) {
      const RVector dx = x - prev_x;
      const double curv = -dx.dot(g - prev_g);
      if (curv > 0.0) trial = dx.squaredNorm() / curv;
    }
    step = trial;
    RVector next;
    double next_val = cur;
    bool accepted = false;
    while (step * gmax > 1e-16 * (1.0 + budget)) {
      next = project_capped_simplex(x + step * g, budget);
      next_val = value(next);
      if (next_val >= cur + opts.armijo_c * g.dot(next - x)) {
        accepted = true;
        break;
      }
      step *= opts.shrink;
    }
    if (!accepted) {
      r.converged = true;
      break;
    }
    const double moved = (next - x).norm();
    const double gained = next_val - cur;
    prev_x = x;
    prev_g = g;
    x = next;
    cur = next_val;
    // Second test: progress has reached the rounding floor of the objective.
    if (moved <= opts.rel_tol * (1.0 + x.norm()) || gained <= 1e-14 * (1.0 + std::abs(cur))) {
      r.converged = true;
      break;
    }
  }
  r.x = x;
  return r;
}

struct LengthResult {
  JointSolution solution;
  bool pg_converged = true;
};

LengthResult eig_approx_at(const ScenarioConfig& cfg, const CorrelatedChannelModel& model, const Metric& metric,
                           int t_train, const EigApproxOptions& opts) {
  const DirectionSystem sys = DirectionSystem::make(model, cfg, t_train);
  const int n = sys.size();
  const int big_t = cfg.coherence_time;
  const double budget = cfg.train_power * t_train;
  LengthResult out;
  JointSolution& s = out.solution;
  s.t_train = t_train;
  s.data_power = sys.p_d;
  s.x_powers = RVector::Constant(n, budget / n);
  s.f_powers = exact_f(sys, metric, sys.gains(s.x_powers));
  s.objective = statistical_objective(sys, metric, s.x_powers, s.f_powers, t_train, big_t);
  s.trace.push_back({0, s.objective});
  s.status = SolveStatus::MaxIters;
  for (int it = 1; it <= opts.max_outer; ++it) {
    const PgResult pg = projected_gradient(sys, metric, s.x_powers, s.f_powers, budget, t_train, big_t, opts);
    out.pg_converged = out.pg_converged && pg.converged;
    const RVector f = exact_f(sys, metric, sys.gains(pg.x));
    const double obj = statistical_objective(sys, metric, pg.x, f, t_train, big_t);
    const double prev = s.objective;
    s.iterations = it;
    if (better(metric, prev, obj)) {
      s.status = SolveStatus::Converged;
      break;
    }
    s.x_powers = pg.x;
    s.f_powers = f;
    s.objective = obj;
    s.trace.push_back({it, obj});
    if (std::abs(obj - prev) <= opts.rel_tol * (1.0 + std::abs(obj))) {
      s.status = SolveStatus::Converged;
      break;
    }
  }
  if (!out.pg_converged) s.status = SolveStatus::MaxIters;
  return out;
}

}  // namespace

EigApproxSolution solve_eig_approx(const ScenarioConfig& cfg, const CorrelatedChannelModel& model,
                                   const Metric& metric, const std::optional<McConfig>& mc_validation,
                                   const EigApproxOptions& opts) {
  cfg.validate();
  require_white_noise(cfg);
  const auto lengths = feasible_training_lengths(cfg, opts.range);
  std::vector<LengthResult> results(lengths.size());
  parallel_chunks(lengths.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) results[k] = eig_approx_at(cfg, model, metric, lengths[k], opts);
  });
  EigApproxSolution out;
  std::vector<JointSolution> candidates;
  candidates.reserve(results.size());
  for (auto& r : results) {
    out.pg_converged = out.pg_converged && r.pg_converged;
    candidates.push_back(std::move(r.solution));
  }
  out.solution = pick_best_length(metric, candidates);
  if (mc_validation) {
    const GramBank bank(cfg.n_rx, cfg.n_data, *mc_validation);
    const DirectionSystem sys = DirectionSystem::make(model, cfg, out.solution.t_train);
    out.validated = mc_effective_objective(sys, metric, out.solution.x_powers, out.solution.t_train,
                                           cfg.coherence_time, bank);
  }
  return out;
}

}  // namespace jointopt
