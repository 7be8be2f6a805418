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

#include <vector>

#include "jointopt/rng.hpp"
#include "jointopt/waterfilling.hpp"
#include "oracles.hpp"

using namespace jointopt;

namespace {

RVector vec(std::initializer_list<double> v) {
  RVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng.engine());
}

// Stationarity residual of a concave separable allocation, relative to mu:
// active entries need deriv == mu, inactive ones deriv(0) <= mu.
double kkt_residual(const RVector& y, double mu, const std::function<double(int, double)>& deriv) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double d = deriv(static_cast<int>(i), y(i));
    worst = std::max(worst, y(i) > 0 ? std::abs(d - mu) / mu : std::max(0.0, d - mu) / mu);
  }
  return worst;
}

std::vector<DirectionParams> random_params(Rng& rng, int n) {
  std::vector<DirectionParams> p(static_cast<std::size_t>(n));
  for (auto& d : p) {
    d.a = uniform(rng, 0.05, 40.0);
    d.b = uniform(rng, 0.01, 5.0);
    d.c = uniform(rng, 0.05, 3.0);
  }
  return p;
}

double x_mi_term(const DirectionParams& d, double y) { return std::log(1.0 + d.a * y / (d.c + d.b * y)); }
double x_mi_deriv(const DirectionParams& d, double y) {
  return d.a * d.c / ((d.c + (d.a + d.b) * y) * (d.c + d.b * y));
}
double x_wmse_term(const DirectionParams& d, double w, double y) {
  return w * (d.c + d.b * y) / (d.c + (d.a + d.b) * y);
}
double x_wmse_deriv(const DirectionParams& d, double w, double y) {
  const double den = d.c + (d.a + d.b) * y;
  return w * d.a * d.c / (den * den);
}

}  // namespace

TEST_CASE("multiplier search") {
  SUBCASE("meets the budget of a linear total") {
    const double mu = find_multiplier([](double m) { return std::max(0.0, 3.0 - m); }, 1.0, 3.0);
    CHECK(mu == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("rejects nonpositive budgets") {
    CHECK_THROWS_AS(find_multiplier([](double) { return 1.0; }, 0.0, 1.0), DomainError);
  }
  SUBCASE("budget met and multiplier isolated on random instances") {
    Rng rng(77);
    for (int k = 0; k < 200; ++k) {
      RVector h(4);
      for (int i = 0; i < 4; ++i) h(i) = uniform(rng, 0.01, 100.0);
      const double p = uniform(rng, 0.01, 50.0);
      const Allocation a = waterfill_f_mi(h, p);
      CHECK(std::abs(a.powers.sum() - p) <= 1e-9 * std::max(1.0, p));
      auto total = [&](double mu) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += std::max(0.0, 1.0 / mu - 1.0 / h(i));
        return s;
      };
      CHECK(total(a.multiplier * (1 - 1e-6)) > p);
      CHECK(total(a.multiplier * (1 + 1e-6)) < p);
    }
  }
}

TEST_CASE("MI water-filling over precoder powers") {
  SUBCASE("single direction takes all power") {
    CHECK(waterfill_f_mi(vec({1.0}), 5.0).powers(0) == doctest::Approx(5.0));
  }
  SUBCASE("equal gains split evenly") {
    const RVector f = waterfill_f_mi(vec({3.0, 3.0}), 2.0).powers;
    CHECK(f(0) == doctest::Approx(1.0));
    CHECK(f(1) == doctest::Approx(1.0));
  }
  SUBCASE("gains 10 and 1 with unit power") {
    const RVector h = vec({10.0, 1.0});
    const Allocation a = waterfill_f_mi(h, 1.0);
    // Level L solves (L - 0.1) + (L - 1) = 1.
    CHECK(a.powers(0) == doctest::Approx(0.95).epsilon(1e-10));
    CHECK(a.powers(1) == doctest::Approx(0.05).epsilon(1e-10));
    const double grid =
        oracle::grid_split([&](double y, double z) { return std::log1p(y * 10.0) + std::log1p(z); }, 1.0, 1000000, true);
    CHECK(std::abs(oracle::sum_log(h, a.powers) - grid) <= 1e-5);
    CHECK(kkt_residual(a.powers, a.multiplier, [&](int i, double y) { return h(i) / (1 + y * h(i)); }) <= 1e-8);
  }
  SUBCASE("all-zero gains are flagged") {
    const Allocation a = waterfill_f_mi(RVector::Zero(3), 1.0);
    CHECK(a.degenerate);
    CHECK(a.powers.isZero());
  }
  SUBCASE("matches the level-bisection oracle") {
    Rng rng(4);
    for (int k = 0; k < 100; ++k) {
      RVector h(6);
      for (int i = 0; i < 6; ++i) h(i) = uniform(rng, 0.0, 20.0);
      const double p = uniform(rng, 0.1, 10.0);
      CHECK((waterfill_f_mi(h, p).powers - oracle::waterfill_mi_level(h, p)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("MI water-filling over training powers") {
  SUBCASE("zero data gain gets no training") {
    auto p = std::vector<DirectionParams>{{0.0, 1.0, 1.0, 0.0}, {2.0, 1.0, 1.0, 0.0}};
    const Allocation a = waterfill_x_mi(p, 3.0);
    CHECK(a.powers(0) == 0.0);
    CHECK(a.powers(1) == doctest::Approx(3.0));
  }
  SUBCASE("symmetric directions split evenly") {
    auto p = std::vector<DirectionParams>{{2.0, 0.5, 1.5, 0.0}, {2.0, 0.5, 1.5, 0.0}};
    const Allocation a = waterfill_x_mi(p, 4.0);
    CHECK(a.powers(0) == doctest::Approx(2.0));
    CHECK(a.powers(1) == doctest::Approx(2.0));
  }
  SUBCASE("no data power anywhere is flagged") {
    auto p = std::vector<DirectionParams>{{0.0, 1.0, 1.0, 0.0}, {0.0, 1.0, 1.0, 0.0}};
    CHECK(waterfill_x_mi(p, 1.0).degenerate);
  }
  SUBCASE("random two-direction instances against a grid") {
    Rng rng(10);
    for (int k = 0; k < 20; ++k) {
      const auto p = random_params(rng, 2);
      const double budget = uniform(rng, 0.1, 20.0);
      const Allocation a = waterfill_x_mi(p, budget);
      const double grid = oracle::grid_split(
          [&](double y, double z) { return x_mi_term(p[0], y) + x_mi_term(p[1], z); }, budget, 1000000, true);
      CHECK(std::abs(x_mi_term(p[0], a.powers(0)) + x_mi_term(p[1], a.powers(1)) - grid) <= 1e-5);
      CHECK(std::abs(a.powers.sum() - budget) <= 1e-9 * std::max(1.0, budget));
      CHECK(kkt_residual(a.powers, a.multiplier, [&](int i, double y) { return x_mi_deriv(p[i], y); }) <= 1e-8);
    }
  }
}

TEST_CASE("weighted MSE water-filling over precoder powers") {
  SUBCASE("equal weights and gains give a uniform split") {
    const RVector f = waterfill_f_wmse(vec({2.0, 2.0, 2.0}), vec({1.0, 1.0, 1.0}), 3.0).powers;
    for (int i = 0; i < 3; ++i) CHECK(f(i) == doctest::Approx(1.0));
  }
  SUBCASE("weights 4 and 1 with equal gains") {
    const RVector h = vec({1.0, 1.0}), w = vec({4.0, 1.0});
    const Allocation a = waterfill_f_wmse(h, w, 2.0);
    // sqrt(w) proportional: 1 + f_i = nu sqrt(w_i), nu = 4/3.
    CHECK(a.powers(0) == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
    CHECK(a.powers(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    const double grid =
        oracle::grid_split([&](double y, double z) { return 4.0 / (1 + y) + 1.0 / (1 + z); }, 2.0, 1000000, false);
    CHECK(std::abs(oracle::sum_wmse(h, a.powers, w) - grid) <= 1e-5);
  }
  SUBCASE("zero-gain direction gets no power") {
    const Allocation a = waterfill_f_wmse(vec({0.0, 3.0}), vec({2.0, 1.0}), 1.0);
    CHECK(a.powers(0) == 0.0);
    CHECK(a.powers(1) == doctest::Approx(1.0));
  }
  SUBCASE("matches the bisection oracle") {
    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
      RVector h(5), w(5);
      for (int i = 0; i < 5; ++i) {
        h(i) = uniform(rng, 0.0, 20.0);
        w(i) = uniform(rng, 0.1, 5.0);
      }
      const double p = uniform(rng, 0.1, 10.0);
      const Allocation a = waterfill_f_wmse(h, w, p);
      CHECK((a.powers - oracle::waterfill_wmse_level(h, w, p)).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(kkt_residual(a.powers, a.multiplier,
                         [&](int i, double y) { return w(i) * h(i) / std::pow(1 + y * h(i), 2); }) <= 1e-8);
    }
  }
}

TEST_CASE("weighted MSE water-filling over training powers") {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto p = random_params(rng, 2);
    const RVector w = vec({uniform(rng, 0.2, 3.0), uniform(rng, 0.2, 3.0)});
    const double budget = uniform(rng, 0.1, 20.0);
    const Allocation a = waterfill_x_wmse(p, w, budget);
    const double grid = oracle::grid_split(
        [&](double y, double z) { return x_wmse_term(p[0], w(0), y) + x_wmse_term(p[1], w(1), z); }, budget,
        1000000, false);
    CHECK(std::abs(x_wmse_term(p[0], w(0), a.powers(0)) + x_wmse_term(p[1], w(1), a.powers(1)) - grid) <= 1e-5);
    CHECK(std::abs(a.powers.sum() - budget) <= 1e-9 * std::max(1.0, budget));
    CHECK(kkt_residual(a.powers, a.multiplier, [&](int i, double y) { return x_wmse_deriv(p[i], w(i), y); }) <= 1e-8);
  }
}

TEST_CASE("exact active-set water-filling") {
  SUBCASE("single stream") {
    const RealizationWaterfill r = waterfill_mi_exact(vec({2.5}), 3.0);
    CHECK(r.objective == doctest::Approx(std::log(1.0 + 7.5)));
    CHECK(r.active == 1);
  }
  SUBCASE("weak stream is dropped") {
    const RealizationWaterfill r = waterfill_mi_exact(vec({10.0, 0.01}), 1.0);
    CHECK(r.active == 1);
    CHECK(r.powers(0) == doctest::Approx(1.0));
    CHECK(r.powers(1) == 0.0);
  }
  SUBCASE("MI agrees with level bisection") {
    Rng rng(6);
    for (int k = 0; k < 200; ++k) {
      RVector g(5);
      for (int i = 0; i < 5; ++i) g(i) = uniform(rng, 0.0, 10.0) * (k % 7 == 0 && i == 2 ? 0.0 : 1.0);
      const double p = uniform(rng, 0.05, 8.0);
      const RealizationWaterfill r = waterfill_mi_exact(g, p);
      const RVector ref = oracle::waterfill_mi_level(g, p);
      CHECK((r.powers - ref).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(r.objective == doctest::Approx(oracle::sum_log(g, ref)).epsilon(1e-10));
      CHECK(std::abs(r.powers.sum() - p) <= 1e-9 * p);
      for (Eigen::Index i = 0; i < g.size(); ++i) CHECK(r.powers(i) >= 0.0);
    }
  }
  SUBCASE("weighted MSE agrees with bisection and keeps inactive weights") {
    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
      RVector g(4), w(4);
      for (int i = 0; i < 4; ++i) {
        g(i) = uniform(rng, 0.0, 10.0);
        w(i) = uniform(rng, 0.1, 3.0);
      }
      const double p = uniform(rng, 0.05, 8.0);
      const RealizationWaterfill r = waterfill_wmse_exact(g, w, p);
      const RVector ref = oracle::waterfill_wmse_level(g, w, p);
      CHECK((r.powers - ref).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(r.objective == doctest::Approx(oracle::sum_wmse(g, ref, w)).epsilon(1e-9));
    }
  }
  SUBCASE("zero weights give zero MSE") {
    CHECK(waterfill_wmse_exact(vec({1.0, 2.0}), vec({0.0, 0.0}), 1.0).objective == 0.0);
  }
}
