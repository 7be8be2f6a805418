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

// Water-filling power allocations.
//
// The four closed forms used by the statistical-CSI alternating solver share
// one pattern: each direction's power is an explicit, nonincreasing function
// of a Lagrange multiplier mu, and mu is found by bisection on log(mu) so the
// budget is met with equality. The exact active-set variants at the bottom
// serve the per-realization allocations of the estimated-CSI objectives.

#pragma once

#include <functional>
#include <span>

#include "jointopt/types.hpp"

namespace jointopt {

struct Allocation {
  RVector powers;
  double multiplier = 0.0;  // mu at the returned allocation
  bool degenerate = false;  // no direction had positive gain; powers are all zero
};

/// Per-direction scalars of the joint training/precoder problem.
///   a = N_R^2 f^2 psi / sigma^2,  b = N_R sigma_N^2 / sigma^2,
///   c = sigma_N^2 / psi + P_D,    h = N_R^2 x^2 psi / sigma^2 / (c + b x^2).
struct DirectionParams {
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  double h = 0.0;
};

/// Finds mu with total(mu) == budget, where total is continuous,
/// nonincreasing, and zero for mu >= mu_hi.
double find_multiplier(const std::function<double(double)>& total, double budget, double mu_hi);

/// f_i^2 = (1/mu - 1/h_i)^+ with sum f_i^2 = p_d.
Allocation waterfill_f_mi(const RVector& h, double p_d);

/// Maximizes sum log(1 + a_i y_i / (c_i + b_i y_i)) s.t. sum y_i = budget via
///   y_i = ( (-c_i(a_i+2b_i) + sqrt(c_i^2(a_i+2b_i)^2 - 4(a_i+b_i)b_i(c_i^2 - a_i c_i/mu))) / (2(a_i+b_i)b_i) )^+.
Allocation waterfill_x_mi(std::span<const DirectionParams> params, double budget);

/// f_i^2 = (sqrt(w_i / (mu h_i)) - 1/h_i)^+ with sum f_i^2 = p_d.
Allocation waterfill_f_wmse(const RVector& h, const RVector& weights, double p_d);

/// y_i = ( sqrt(w_i a_i c_i / mu) / (a_i + b_i) - c_i / (a_i + b_i) )^+ with sum y_i = budget.
Allocation waterfill_x_wmse(std::span<const DirectionParams> params, const RVector& weights, double budget);

/// Exact per-realization water-filling result.
struct RealizationWaterfill {
  RVector powers;
  double objective = 0.0;  // sum log(1 + f^2 g) for MI, sum w / (1 + f^2 g) for WMSE
  int active = 0;          // number of streams with positive power
};

/// MI water-filling by active-set shrinking: with the k strongest gains
/// active, 1/mu = (p_d + sum 1/g_i) / k; k is the largest count whose weakest
/// member still gets strictly positive power.
RealizationWaterfill waterfill_mi_exact(const RVector& gains, double p_d);

/// Weighted-MSE water-filling by active-set shrinking. Weights pair with gains
/// by index. The minimum equals
///   (sum_A sqrt(w_i/g_i))^2 / (p_d + sum_A 1/g_i) + sum_{i not in A} w_i.
RealizationWaterfill waterfill_wmse_exact(const RVector& gains, const RVector& weights, double p_d);

}  // namespace jointopt
