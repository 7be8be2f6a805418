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

#include "jointopt/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "jointopt/harness.hpp"
#include "jointopt/parallel.hpp"

namespace jointopt {

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "estimation") return Suite::Estimation;
  if (name == "waterfill") return Suite::WaterfillOracles;
  if (name == "structure") return Suite::StructureChecks;
  if (name == "convergence") return Suite::Convergence;
  return std::nullopt;
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Estimation: return "estimation";
    case Suite::WaterfillOracles: return "waterfill";
    case Suite::StructureChecks: return "structure";
    case Suite::Convergence: return "convergence";
  }
  return "?";
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void write_report(std::ostream& os, const ValidationReport& report) {
  os << "suite,property,residual,threshold,verdict\n";
  for (const auto& c : report.checks) {
    os << c.suite << ',' << c.property << ',' << format_number(c.residual) << ',' << format_number(c.threshold) << ','
       << (c.passed ? "PASS" : "FAIL") << '\n';
  }
}

namespace {

class Recorder {
 public:
  explicit Recorder(Suite s) : suite_(to_string(s)) {}
  void check(const std::string& property, double residual, double threshold) {
    report_.checks.push_back({suite_, property, residual, threshold, residual <= threshold});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  std::string suite_;
  ValidationReport report_;
};

RVector random_powers(Rng& rng, int n, double total) {
  RVector v(n);
  for (int i = 0; i < n; ++i) v(i) = std::abs(rng.normal()) + 0.05;
  return v * (total / v.sum());
}

CMatrix random_hermitian_psd(Rng& rng, int n, double ridge) {
  const CMatrix a = rng.complex_gaussian(n, n);
  return symmetrize(a * a.adjoint() / n + CMatrix::Identity(n, n) * ridge);
}

ValidationReport estimation_suite() {
  Recorder rec(Suite::Estimation);
  const int n = 4;
  const int t_train = 6;
  const double sigma2 = 0.5;
  const auto model = CorrelatedChannelModel::exponential(0.9, n);
  Rng rng(2024);
  const RVector x = random_powers(rng, n, 0.8 * t_train);
  const CMatrix r_n = CMatrix::Identity(t_train, t_train) * sigma2;
  const TrainingDesign tr = build_training(model, r_n, x, t_train, n);

  const CMatrix direct =
      (model.psi().inverse() + static_cast<double>(n) * tr.x_matrix * r_n.inverse() * tr.x_matrix.adjoint()).inverse();
  rec.check("phi_matches_direct_inverse", frobenius_rel_error(tr.phi, direct), 1e-10);
  rec.check("phi_plus_pi_over_nr_equals_psi", (tr.phi + tr.pi_mat / n - model.psi()).norm(), 1e-12);
  rec.check("training_energy", std::abs((tr.x_matrix * tr.x_matrix.adjoint()).trace().real() - x.sum()), 1e-9);

  const int trials = 20000;
  std::vector<CMatrix> err(trials), cross(trials);
  parallel_chunks(trials, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      Rng r(7, k);
      const ChannelRealization h = sample_channel(model, n, r);
      const EstimationOutput est = estimate(h, tr, r);
      const CMatrix dh = h.h - est.h_hat;
      err[k] = dh.adjoint() * dh;
      cross[k] = est.h_hat.adjoint() * dh;
    }
  });
  CMatrix e_sum = CMatrix::Zero(n, n), c_sum = CMatrix::Zero(n, n);
  for (int k = 0; k < trials; ++k) {
    e_sum += err[static_cast<std::size_t>(k)];
    c_sum += cross[static_cast<std::size_t>(k)];
  }
  e_sum /= trials;
  c_sum /= trials;
  rec.check("mc_error_covariance_vs_nr_phi", frobenius_rel_error(e_sum, tr.phi * n), 0.02);
  rec.check("orthogonality_cross_covariance", c_sum.norm() / tr.pi_mat.norm(), 0.02);

  const RVector wf = training_power_mse_waterfill(model, r_n, n, 2.0);
  rec.check("mse_waterfill_budget", std::abs(wf.sum() - 2.0), 1e-9);
  return rec.take();
}

double grid_best(const std::function<double(double)>& obj, double budget, int points, bool maximize) {
  double best = maximize ? -1e300 : 1e300;
  for (int k = 0; k <= points; ++k) {
    const double v = obj(budget * k / points);
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

ValidationReport waterfill_suite() {
  Recorder rec(Suite::WaterfillOracles);
  Rng rng(99);
  const int grid = 1000000;
  double dev_fmi = 0, dev_xmi = 0, dev_fw = 0, dev_xw = 0, kkt = 0, budget_err = 0;
  for (int inst = 0; inst < 10; ++inst) {
    const double p = 0.5 + 4.0 * std::abs(rng.normal());
    RVector h(2);
    h << 0.1 + 5.0 * std::abs(rng.normal()), 0.1 + 5.0 * std::abs(rng.normal());
    RVector w(2);
    w << 0.2 + std::abs(rng.normal()), 0.2 + std::abs(rng.normal());
    std::vector<DirectionParams> dp(2);
    for (auto& d : dp) {
      d.a = 0.1 + 10.0 * std::abs(rng.normal());
      d.b = 0.05 + 2.0 * std::abs(rng.normal());
      d.c = 0.1 + 2.0 * std::abs(rng.normal());
    }

    const auto fmi = waterfill_f_mi(h, p);
    const auto obj_fmi = [&](double y) { return std::log1p(y * h(0)) + std::log1p((p - y) * h(1)); };
    dev_fmi = std::max(dev_fmi, std::abs(grid_best(obj_fmi, p, grid, true) - obj_fmi(fmi.powers(0))));
    for (int i = 0; i < 2; ++i) {
      const double level = 1.0 / fmi.multiplier;
      kkt = std::max(kkt, fmi.powers(i) > 0 ? std::abs(fmi.powers(i) + 1.0 / h(i) - level) / level
                                            : std::max(0.0, level - 1.0 / h(i)) / level);
    }
    budget_err = std::max(budget_err, std::abs(fmi.powers.sum() - p));

    const auto xmi = waterfill_x_mi(dp, p);
    const auto term_mi = [&](int i, double y) { return std::log1p(dp[i].a * y / (dp[i].c + dp[i].b * y)); };
    const auto obj_xmi = [&](double y) { return term_mi(0, y) + term_mi(1, p - y); };
    dev_xmi = std::max(dev_xmi, std::abs(grid_best(obj_xmi, p, grid, true) - obj_xmi(xmi.powers(0))));
    for (int i = 0; i < 2; ++i) {
      const auto& d = dp[static_cast<std::size_t>(i)];
      const double y = xmi.powers(i);
      const double deriv = d.a * d.c / ((d.c + (d.a + d.b) * y) * (d.c + d.b * y));
      kkt = std::max(kkt, y > 0 ? std::abs(deriv - xmi.multiplier) / xmi.multiplier
                                : std::max(0.0, deriv - xmi.multiplier) / xmi.multiplier);
    }
    budget_err = std::max(budget_err, std::abs(xmi.powers.sum() - p));

    const auto fw = waterfill_f_wmse(h, w, p);
    const auto obj_fw = [&](double y) { return w(0) / (1 + y * h(0)) + w(1) / (1 + (p - y) * h(1)); };
    dev_fw = std::max(dev_fw, std::abs(grid_best(obj_fw, p, grid, false) - obj_fw(fw.powers(0))));
    for (int i = 0; i < 2; ++i) {
      const double deriv = w(i) * h(i) / std::pow(1 + fw.powers(i) * h(i), 2);
      kkt = std::max(kkt, fw.powers(i) > 0 ? std::abs(deriv - fw.multiplier) / fw.multiplier
                                           : std::max(0.0, deriv - fw.multiplier) / fw.multiplier);
    }
    budget_err = std::max(budget_err, std::abs(fw.powers.sum() - p));

    const auto xw = waterfill_x_wmse(dp, w, p);
    const auto term_w = [&](int i, double y) {
      const auto& d = dp[static_cast<std::size_t>(i)];
      return w(i) * (d.c + d.b * y) / (d.c + (d.a + d.b) * y);
    };
    const auto obj_xw = [&](double y) { return term_w(0, y) + term_w(1, p - y); };
    dev_xw = std::max(dev_xw, std::abs(grid_best(obj_xw, p, grid, false) - obj_xw(xw.powers(0))));
    for (int i = 0; i < 2; ++i) {
      const auto& d = dp[static_cast<std::size_t>(i)];
      const double y = xw.powers(i);
      const double deriv = w(i) * d.a * d.c / std::pow(d.c + (d.a + d.b) * y, 2);
      kkt = std::max(kkt, y > 0 ? std::abs(deriv - xw.multiplier) / xw.multiplier
                                : std::max(0.0, deriv - xw.multiplier) / xw.multiplier);
    }
    budget_err = std::max(budget_err, std::abs(xw.powers.sum() - p));
  }
  rec.check("f_mi_vs_grid", dev_fmi, 1e-5);
  rec.check("x_mi_vs_grid", dev_xmi, 1e-5);
  rec.check("f_wmse_vs_grid", dev_fw, 1e-5);
  rec.check("x_wmse_vs_grid", dev_xw, 1e-5);
  rec.check("kkt_relative_residual", kkt, 1e-8);
  rec.check("budget_equality", budget_err, 1e-9);
  return rec.take();
}

ValidationReport structure_suite() {
  Recorder rec(Suite::StructureChecks);
  Rng rng(5);
  const int n = 4;
  double roundtrip = 0, power = 0, equiv = 0, scalar = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const double noise = 0.05 + std::abs(rng.normal());
    const double p_d = 0.5 + 3.0 * std::abs(rng.normal());
    const CMatrix phi = random_hermitian_psd(rng, n, 0.01);
    CMatrix f = rng.complex_gaussian(n, n);
    f *= std::sqrt(p_d) / f.norm();
    const CMatrix ft = to_tilde(f, phi, noise, p_d);
    const RecoveredPrecoder back = recover_precoder(ft, phi, noise, p_d);
    roundtrip = std::max(roundtrip, frobenius_rel_error(back.f, f));
    power = std::max(power, std::abs(back.f.squaredNorm() - p_d) / p_d);
    const double lhs = transformed_power(f, phi, noise, p_d);
    equiv = std::max(equiv, std::abs(lhs - ft.squaredNorm()) / p_d + std::max(0.0, lhs - p_d * (1 + 1e-12)));
  }
  const auto model = CorrelatedChannelModel::exponential(0.9, n);
  for (int inst = 0; inst < 50; ++inst) {
    ScenarioConfig cfg;
    cfg.n_tx = cfg.n_rx = cfg.n_data = n;
    cfg.noise_var = 0.05 + std::abs(rng.normal());
    const int t = 6;
    const DirectionSystem sys = DirectionSystem::make(model, cfg, t);
    const RVector x = random_powers(rng, n, cfg.train_power * t);
    const RVector fp = random_powers(rng, n, sys.p_d);
    const TrainingDesign tr = build_training(model, cfg.training_noise_covariance(t), x, t, cfg.n_rx);
    const ChannelFactor cf = channel_factor(tr, cfg.noise_var, sys.p_d);
    const RVector h = sys.gains(x);
    // Streams in factor order are directions sorted by gain.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return h(a) > h(b); });
    RVector f_stream(n), expect(n);
    for (int k = 0; k < n; ++k) {
      f_stream(k) = fp(order[static_cast<std::size_t>(k)]);
      expect(k) = f_stream(k) * h(order[static_cast<std::size_t>(k)]);
    }
    const PrecoderDesign d = build_precoder(cf, f_stream, tr.phi, cfg.noise_var, sys.p_d, ObjectiveKind::MI);
    const CMatrix snr = matrix_snr(d.f_matrix, hermitian_sqrt(tr.pi_mat), tr.phi, cfg.noise_var);
    scalar = std::max(scalar, (snr - CMatrix(expect.cast<cplx>().asDiagonal())).norm() / expect.norm());
  }
  rec.check("tilde_round_trip", roundtrip, 1e-9);
  rec.check("recovered_power_equals_p_d", power, 1e-9);
  rec.check("constraint_equivalence", equiv, 1e-9);
  rec.check("scalarization_matches_matrix", scalar, 1e-10);
  return rec.take();
}

ValidationReport convergence_suite() {
  Recorder rec(Suite::Convergence);
  // The iteration bound is checked at N = 2..4; N = 8 checks monotonicity only.
  for (int n : {2, 3, 4, 8}) {
    ScenarioConfig cfg;
    cfg.n_tx = cfg.n_rx = cfg.n_data = n;
    const auto model = CorrelatedChannelModel::from_config(cfg);
    for (const Metric& metric : {Metric::mi(), Metric::wmse()}) {
      for (double snr : {0.0, 10.0, 20.0, 30.0}) {
        ScenarioConfig c = cfg;
        c.set_snr_db(snr);
        const JointSolution s = solve_joint_statistical(c, model, metric);
        double violation = 0.0;
        for (std::size_t k = 1; k < s.trace.size(); ++k) {
          const double d = s.trace[k].objective - s.trace[k - 1].objective;
          violation = std::max(violation, metric.maximize() ? -d : d);
        }
        const std::string tag = to_string(metric.kind) + "_n" + std::to_string(n) + "_snr" + format_number(snr);
        rec.check(tag + "_trace_monotone", violation, 1e-12);
        if (n <= 4) rec.check(tag + "_iterations", s.iterations, 10);
      }
    }
  }
  return rec.take();
}

}  // namespace

ValidationReport run_validation(Suite suite) {
  switch (suite) {
    case Suite::Estimation: return estimation_suite();
    case Suite::WaterfillOracles: return waterfill_suite();
    case Suite::StructureChecks: return structure_suite();
    case Suite::Convergence: return convergence_suite();
  }
  return {};
}

}  // namespace jointopt
