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

#include "jointopt/waterfilling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace jointopt {

double find_multiplier(const std::function<double(double)>& total, double budget, double mu_hi) {
  if (!(budget > 0.0)) throw DomainError("find_multiplier: budget must be positive");
  if (!(mu_hi > 0.0) || !std::isfinite(mu_hi)) throw DomainError("find_multiplier: invalid multiplier bound");
  double hi = mu_hi;
  double lo = mu_hi;
  for (int k = 0; total(lo) < budget; ++k) {
    if (k > 400) throw NumericError("find_multiplier: budget not reachable");
    hi = lo;
    lo *= 1e-2;
  }
  // Bisection in log(mu): total(lo) >= budget >= total(hi).
  for (int k = 0; k < 200; ++k) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    if (total(mid) >= budget) lo = mid;
    else hi = mid;
  }
  // Pick the endpoint whose total is closest to the budget.
  return std::abs(total(lo) - budget) <= std::abs(total(hi) - budget) ? lo : hi;
}

namespace {

void require_budget(double budget, const char* who) {
  if (!(budget > 0.0)) throw DomainError(std::string(who) + ": budget must be positive");
}

void require_weights(const RVector& w, Eigen::Index n, const char* who) {
  if (w.size() != n) throw DimensionError(std::string(who) + ": weights length mismatch");
  if ((w.array() < 0.0).any()) throw DomainError(std::string(who) + ": weights must be nonnegative");
}

double x_mi_power(const DirectionParams& p, double mu) {
  if (!(p.a > 0.0) || mu >= p.a / p.c) return 0.0;
  const double qa = (p.a + p.b) * p.b;
  const double qb = p.c * (p.a + 2.0 * p.b);
  const double qc = p.c * p.c - p.a * p.c / mu;
  // Root of qa y^2 + qb y + qc with qc < 0, written without cancellation.
  const double root = -2.0 * qc / (qb + std::sqrt(qb * qb - 4.0 * qa * qc));
  (void)qa;
  return std::max(0.0, root);
}

double x_wmse_power(const DirectionParams& p, double w, double mu) {
  if (!(p.a > 0.0) || !(w > 0.0)) return 0.0;
  return std::max(0.0, (std::sqrt(w * p.a * p.c / mu) - p.c) / (p.a + p.b));
}

}  // namespace

Allocation waterfill_f_mi(const RVector& h, double p_d) {
  require_budget(p_d, "waterfill_f_mi");
  Allocation out{RVector::Zero(h.size()), 0.0, false};
  const double mu_hi = h.size() > 0 ? h.maxCoeff() : 0.0;
  if (!(mu_hi > 0.0)) {
    out.degenerate = true;
    return out;
  }
  auto powers = [&](double mu) {
    RVector f(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) f(i) = h(i) > 0.0 ? std::max(0.0, 1.0 / mu - 1.0 / h(i)) : 0.0;
    return f;
  };
  out.multiplier = find_multiplier([&](double mu) { return powers(mu).sum(); }, p_d, mu_hi);
  out.powers = powers(out.multiplier);
  return out;
}

Allocation waterfill_x_mi(std::span<const DirectionParams> params, double budget) {
  require_budget(budget, "waterfill_x_mi");
  const auto n = static_cast<Eigen::Index>(params.size());
  Allocation out{RVector::Zero(n), 0.0, false};
  double mu_hi = 0.0;
  for (const auto& p : params) {
    if (!(p.b > 0.0) || !(p.c > 0.0)) throw DomainError("waterfill_x_mi: b and c must be positive");
    if (p.a > 0.0) mu_hi = std::max(mu_hi, p.a / p.c);
  }
  if (!(mu_hi > 0.0)) {
    out.degenerate = true;
    return out;
  }
  auto powers = [&](double mu) {
    RVector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = x_mi_power(params[static_cast<std::size_t>(i)], mu);
    return y;
  };
  out.multiplier = find_multiplier([&](double mu) { return powers(mu).sum(); }, budget, mu_hi);
  out.powers = powers(out.multiplier);
  return out;
}

Allocation waterfill_f_wmse(const RVector& h, const RVector& weights, double p_d) {
  require_budget(p_d, "waterfill_f_wmse");
  require_weights(weights, h.size(), "waterfill_f_wmse");
  Allocation out{RVector::Zero(h.size()), 0.0, false};
  double mu_hi = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (h(i) > 0.0) mu_hi = std::max(mu_hi, weights(i) * h(i));
  if (!(mu_hi > 0.0)) {
    out.degenerate = true;
    return out;
  }
  auto powers = [&](double mu) {
    RVector f = RVector::Zero(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      if (h(i) > 0.0 && weights(i) > 0.0) f(i) = std::max(0.0, std::sqrt(weights(i) / (mu * h(i))) - 1.0 / h(i));
    }
    return f;
  };
  out.multiplier = find_multiplier([&](double mu) { return powers(mu).sum(); }, p_d, mu_hi);
  out.powers = powers(out.multiplier);
  return out;
}

Allocation waterfill_x_wmse(std::span<const DirectionParams> params, const RVector& weights, double budget) {
  require_budget(budget, "waterfill_x_wmse");
  const auto n = static_cast<Eigen::Index>(params.size());
  require_weights(weights, n, "waterfill_x_wmse");
  Allocation out{RVector::Zero(n), 0.0, false};
  double mu_hi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = params[static_cast<std::size_t>(i)];
    if (!(p.b > 0.0) || !(p.c > 0.0)) throw DomainError("waterfill_x_wmse: b and c must be positive");
    if (p.a > 0.0) mu_hi = std::max(mu_hi, weights(i) * p.a / p.c);
  }
  if (!(mu_hi > 0.0)) {
    out.degenerate = true;
    return out;
  }
  auto powers = [&](double mu) {
    RVector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = x_wmse_power(params[static_cast<std::size_t>(i)], weights(i), mu);
    return y;
  };
  out.multiplier = find_multiplier([&](double mu) { return powers(mu).sum(); }, budget, mu_hi);
  out.powers = powers(out.multiplier);
  return out;
}

namespace {

// Indices with positive key, ordered by key descending (stable).
std::vector<Eigen::Index> ranked(const RVector& key) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < key.size(); ++i)
    if (key(i) > 0.0) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return key(a) > key(b); });
  return idx;
}

}  // namespace

RealizationWaterfill waterfill_mi_exact(const RVector& gains, double p_d) {
  require_budget(p_d, "waterfill_mi_exact");
  RealizationWaterfill out{RVector::Zero(gains.size()), 0.0, 0};
  const auto order = ranked(gains);
  double inv_sum = 0.0;
  for (Eigen::Index i : order) inv_sum += 1.0 / gains(i);
  for (auto k = order.size(); k > 0; --k) {
    const double level = (p_d + inv_sum) / static_cast<double>(k);
    const Eigen::Index weakest = order[k - 1];
    if (level > 1.0 / gains(weakest)) {
      for (std::size_t j = 0; j < k; ++j) {
        const Eigen::Index i = order[j];
        out.powers(i) = level - 1.0 / gains(i);
        out.objective += std::log(level * gains(i));
      }
      out.active = static_cast<int>(k);
      return out;
    }
    inv_sum -= 1.0 / gains(weakest);
  }
  return out;
}

RealizationWaterfill waterfill_wmse_exact(const RVector& gains, const RVector& weights, double p_d) {
  require_budget(p_d, "waterfill_wmse_exact");
  require_weights(weights, gains.size(), "waterfill_wmse_exact");
  RealizationWaterfill out{RVector::Zero(gains.size()), weights.sum(), 0};
  RVector key = RVector::Zero(gains.size());
  for (Eigen::Index i = 0; i < gains.size(); ++i)
    if (gains(i) > 0.0) key(i) = weights(i) * gains(i);
  const auto order = ranked(key);
  double root_sum = 0.0;
  double inv_sum = 0.0;
  for (Eigen::Index i : order) {
    root_sum += std::sqrt(weights(i) / gains(i));
    inv_sum += 1.0 / gains(i);
  }
  for (auto k = order.size(); k > 0; --k) {
    const double sqrt_mu = root_sum / (p_d + inv_sum);
    const Eigen::Index weakest = order[k - 1];
    if (key(weakest) > sqrt_mu * sqrt_mu) {
      double inactive = weights.sum();
      for (std::size_t j = 0; j < k; ++j) {
        const Eigen::Index i = order[j];
        out.powers(i) = std::sqrt(weights(i) / gains(i)) / sqrt_mu - 1.0 / gains(i);
        inactive -= weights(i);
      }
      out.objective = root_sum * root_sum / (p_d + inv_sum) + std::max(0.0, inactive);
      out.active = static_cast<int>(k);
      return out;
    }
    root_sum -= std::sqrt(weights(weakest) / gains(weakest));
    inv_sum -= 1.0 / gains(weakest);
  }
  return out;
}

}  // namespace jointopt
