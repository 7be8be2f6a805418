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

// Optimal precoder structure, the F-tilde change of variables, and the
// effective-metric evaluators shared by both joint solvers.

#pragma once

#include <optional>
#include <vector>

#include "jointopt/channel_estimation.hpp"
#include "jointopt/waterfilling.hpp"

namespace jointopt {

enum class ObjectiveKind { MI, SumMSE, WeightedMI, WeightedMSE, SchurConvex, SchurConcave };

enum class MetricKind { MI, WMSE };

/// Effective metric selector. WMSE weights are sorted descending and paired
/// with streams strongest first; an empty vector means all ones.
struct Metric {
  MetricKind kind = MetricKind::MI;
  RVector weights;

  static Metric mi() { return {}; }
  static Metric wmse(RVector w = {}) { return {MetricKind::WMSE, std::move(w)}; }
  bool maximize() const { return kind == MetricKind::MI; }
  /// Weights for n streams, sorted descending. Throws on length mismatch or negative entries.
  RVector weights_for(int n) const;
};

/// Scale of the equivalent noise covariance R_v = r_v_scale * I.
struct EffectiveNoise {
  double r_v_scale = 0.0;
};

EffectiveNoise effective_noise(const CMatrix& f, const CMatrix& phi, double noise_var);

/// F^H Hhat^H Hhat F / (sigma_N^2 + Tr(Phi F F^H)).
CMatrix matrix_snr(const CMatrix& f, const CMatrix& h_hat, const CMatrix& phi, double noise_var);

/// SVD of Pi^{1/2} (sigma_N^2 I + P_D Phi)^{-1/2} with singular values descending.
struct ChannelFactor {
  CMatrix u_h;
  RVector singular_values;
  CMatrix v_h;
};

ChannelFactor channel_factor(const TrainingDesign& training, double noise_var, double p_d);
ChannelFactor channel_factor(const TrainingDesign& training, const ScenarioConfig& cfg);

/// Right unitary of the optimal F-tilde for each objective family.
/// WeightedMI takes aux = A A^H, WeightedMSE takes aux = W.
CMatrix structure_unitary(ObjectiveKind kind, int n_data, const std::optional<CMatrix>& aux = std::nullopt);

/// (sigma_N^2 I + P_D Phi)^{1/2} [sigma_N^2 + Tr(Phi F F^H)]^{-1/2} F.
CMatrix to_tilde(const CMatrix& f, const CMatrix& phi, double noise_var, double p_d);

/// Tr[(sigma_N^2 I + P_D Phi) F F^H] / (sigma_N^2 + Tr(Phi F F^H)); equals Tr(F~ F~^H).
double transformed_power(const CMatrix& f, const CMatrix& phi, double noise_var, double p_d);

struct RecoveredPrecoder {
  CMatrix f;
  bool degenerate = false;  // zero F-tilde; f is the zero matrix
};

/// Inverse of to_tilde, scaled so that Tr(F F^H) = p_d.
RecoveredPrecoder recover_precoder(const CMatrix& f_tilde, const CMatrix& phi, double noise_var, double p_d);

struct PrecoderDesign {
  RVector f_powers;  // per stream, aligned with columns of v_h
  CMatrix v_h;
  CMatrix u_f;
  CMatrix f_tilde;
  CMatrix f_matrix;
  ObjectiveKind objective_kind = ObjectiveKind::MI;
  bool degenerate = false;
};

/// F~ = V_H(:, 1:n) diag(sqrt(f)) U_F^H followed by recovery of F.
PrecoderDesign build_precoder(const ChannelFactor& factor, const RVector& f_powers, const CMatrix& phi,
                              double noise_var, double p_d, ObjectiveKind kind,
                              const std::optional<CMatrix>& aux = std::nullopt);

/// Per-direction gains N_R (psi_i - phi_i) / (sigma_N^2 + P_D phi_i) read off a
/// training design. Throws DomainError when Phi is not diagonal in the U_Psi basis.
RVector aligned_gains(const CorrelatedChannelModel& model, const TrainingDesign& training, double noise_var,
                      double p_d);

/// Scalar model of the structured problem over the n_data strongest
/// eigen-directions of Psi, each paired with the matching smallest
/// training-noise eigenvalue.
struct DirectionSystem {
  RVector psi;     // descending
  RVector sigma2;  // ascending
  double n_rx = 1.0;
  double noise_var = 1.0;
  double p_d = 1.0;

  static DirectionSystem make(const CorrelatedChannelModel& model, const ScenarioConfig& cfg, int t_train);
  int size() const { return static_cast<int>(psi.size()); }
  /// h_i = N_R^2 x^2 psi / sigma^2 / (sigma_N^2/psi + N_R sigma_N^2 x^2/sigma^2 + P_D).
  double gain(int i, double x2) const;
  RVector gains(const RVector& x_powers) const;
  /// N_R x^2 psi / sigma^2 / (same denominator) = gain / N_R.
  RVector lambda_sigma(const RVector& x_powers) const;
  std::vector<DirectionParams> params(const RVector& f_powers, const RVector& x_powers) const;
};

/// (T - T_T)/T * sum log(1 + f_i^2 lambda_i).
double effective_mi(const RVector& gains, const RVector& f_powers, int t_train, int coherence_time);
/// T/(T - T_T) * sum w_i / (1 + f_i^2 lambda_i).
double effective_weighted_mse(const RVector& gains, const RVector& f_powers, const RVector& weights, int t_train,
                              int coherence_time);

/// Matrix forms: (T - T_T)/T log det(I + S) and T/(T - T_T) Tr[W (I + S)^{-1}].
double effective_mi_matrix(const CMatrix& snr, int t_train, int coherence_time);
double effective_weighted_mse_matrix(const CMatrix& snr, const CMatrix& w, int t_train, int coherence_time);

/// Dispatches on the metric using weights_for(gains.size()).
double effective_objective(const Metric& metric, const RVector& gains, const RVector& f_powers, int t_train,
                           int coherence_time);

}  // namespace jointopt
