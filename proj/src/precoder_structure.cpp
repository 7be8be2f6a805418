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

#include "jointopt/precoder_structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace jointopt {

RVector Metric::weights_for(int n) const {
  if (weights.size() == 0) return RVector::Ones(n);
  if (weights.size() != n) {
    throw DimensionError("metric weights have length " + std::to_string(weights.size()) + ", expected " +
                         std::to_string(n));
  }
  if ((weights.array() < 0.0).any() || !weights.allFinite()) throw DomainError("metric weights must be nonnegative");
  RVector w = weights;
  std::sort(w.data(), w.data() + w.size(), std::greater<>());
  return w;
}

namespace {

double trace_quadratic(const CMatrix& f, const CMatrix& m) { return (f.adjoint() * m * f).trace().real(); }

CMatrix noise_plus_error(const CMatrix& phi, double noise_var, double p_d) {
  return CMatrix::Identity(phi.rows(), phi.cols()) * noise_var + phi * p_d;
}

void check_precoder_dims(const CMatrix& f, const CMatrix& phi) {
  if (phi.rows() != phi.cols() || f.rows() != phi.rows()) throw DimensionError("precoder and Phi dimensions differ");
}

}  // namespace

EffectiveNoise effective_noise(const CMatrix& f, const CMatrix& phi, double noise_var) {
  check_precoder_dims(f, phi);
  return {noise_var + trace_quadratic(f, phi)};
}

CMatrix matrix_snr(const CMatrix& f, const CMatrix& h_hat, const CMatrix& phi, double noise_var) {
  check_precoder_dims(f, phi);
  if (h_hat.cols() != f.rows()) throw DimensionError("matrix_snr: channel estimate and precoder dimensions differ");
  const CMatrix hf = h_hat * f;
  return symmetrize(hf.adjoint() * hf) / effective_noise(f, phi, noise_var).r_v_scale;
}

ChannelFactor channel_factor(const TrainingDesign& training, double noise_var, double p_d) {
  const CMatrix& phi = training.phi;
  const Eigen::Index n = phi.rows();
  const CMatrix k_inv_sqrt = hermitian_inv_sqrt(noise_plus_error(phi, noise_var, p_d));
  const CMatrix m = hermitian_sqrt(training.pi_mat) * k_inv_sqrt;

  const Evd right = sorted_evd(symmetrize(m.adjoint() * m));
  ChannelFactor out;
  out.v_h = right.vectors;
  out.singular_values = right.values.cwiseMax(0.0).cwiseSqrt();

  const double cutoff = 1e-7 * std::max(out.singular_values(0), 1e-300);
  Eigen::Index rank = 0;
  while (rank < n && out.singular_values(rank) > cutoff) ++rank;
  for (Eigen::Index k = rank; k < n; ++k) out.singular_values(k) = 0.0;

  CMatrix u_r = m * out.v_h.leftCols(rank);
  for (Eigen::Index k = 0; k < rank; ++k) u_r.col(k) /= out.singular_values(k);
  out.u_h = CMatrix::Identity(n, n);
  if (rank > 0) {
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(u_r).householderQ();
    out.u_h.leftCols(rank) = u_r;
    out.u_h.rightCols(n - rank) = q.rightCols(n - rank);
  }
  return out;
}

ChannelFactor channel_factor(const TrainingDesign& training, const ScenarioConfig& cfg) {
  return channel_factor(training, cfg.noise_var, phase_budget(cfg, training.t_train).data_power);
}

CMatrix structure_unitary(ObjectiveKind kind, int n_data, const std::optional<CMatrix>& aux) {
  if (n_data < 1) throw DomainError("structure_unitary: n_data must be positive");
  switch (kind) {
    case ObjectiveKind::MI:
    case ObjectiveKind::SumMSE:
    case ObjectiveKind::SchurConcave:
      return CMatrix::Identity(n_data, n_data);
    case ObjectiveKind::SchurConvex:
      return dft_unitary(n_data);
    case ObjectiveKind::WeightedMI:
    case ObjectiveKind::WeightedMSE:
      if (!aux) throw DomainError("structure_unitary: weighted objectives need their weighting matrix");
      if (aux->rows() != n_data || aux->cols() != n_data) throw DimensionError("structure_unitary: aux must be n_data x n_data");
      return sorted_evd(*aux).vectors;
  }
  throw DomainError("structure_unitary: unknown objective kind");
}

CMatrix to_tilde(const CMatrix& f, const CMatrix& phi, double noise_var, double p_d) {
  check_precoder_dims(f, phi);
  const double scale = effective_noise(f, phi, noise_var).r_v_scale;
  return hermitian_sqrt(noise_plus_error(phi, noise_var, p_d)) * f / std::sqrt(scale);
}

double transformed_power(const CMatrix& f, const CMatrix& phi, double noise_var, double p_d) {
  check_precoder_dims(f, phi);
  return trace_quadratic(f, noise_plus_error(phi, noise_var, p_d)) / effective_noise(f, phi, noise_var).r_v_scale;
}

RecoveredPrecoder recover_precoder(const CMatrix& f_tilde, const CMatrix& phi, double noise_var, double p_d) {
  check_precoder_dims(f_tilde, phi);
  RecoveredPrecoder out;
  const CMatrix shaped = hermitian_inv_sqrt(noise_plus_error(phi, noise_var, p_d)) * f_tilde;
  const double denom = shaped.squaredNorm();
  if (!(denom > 0.0)) {
    out.f = CMatrix::Zero(f_tilde.rows(), f_tilde.cols());
    out.degenerate = true;
    return out;
  }
  out.f = shaped * std::sqrt(p_d / denom);
  return out;
}

PrecoderDesign build_precoder(const ChannelFactor& factor, const RVector& f_powers, const CMatrix& phi,
                              double noise_var, double p_d, ObjectiveKind kind, const std::optional<CMatrix>& aux) {
  const auto n = static_cast<int>(f_powers.size());
  if (n < 1 || n > factor.v_h.cols()) throw DimensionError("build_precoder: stream count exceeds channel rank");
  if ((f_powers.array() < 0.0).any()) throw DomainError("build_precoder: negative stream power");
  PrecoderDesign d;
  d.f_powers = f_powers;
  d.v_h = factor.v_h;
  d.u_f = structure_unitary(kind, n, aux);
  d.objective_kind = kind;
  const CMatrix scaled = factor.v_h.leftCols(n) * f_powers.cwiseSqrt().cast<cplx>().asDiagonal();
  d.f_tilde = scaled * d.u_f.adjoint();
  const RecoveredPrecoder rec = recover_precoder(d.f_tilde, phi, noise_var, p_d);
  d.f_matrix = rec.f;
  d.degenerate = rec.degenerate;
  return d;
}

RVector aligned_gains(const CorrelatedChannelModel& model, const TrainingDesign& training, double noise_var,
                      double p_d) {
  const CMatrix d = model.psi_evecs().adjoint() * training.phi * model.psi_evecs();
  const CMatrix off = d - CMatrix(d.diagonal().asDiagonal());
  if (off.norm() > 1e-9 * std::max(training.phi.norm(), 1e-300)) {
    throw DomainError("aligned_gains: Phi is not diagonal in the eigenbasis of Psi");
  }
  const RVector& psi = model.psi_evals();
  RVector g(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double phi_i = d(i, i).real();
    g(i) = std::max(0.0, training.n_rx * (psi(i) - phi_i) / (noise_var + p_d * phi_i));
  }
  return g;
}

DirectionSystem DirectionSystem::make(const CorrelatedChannelModel& model, const ScenarioConfig& cfg, int t_train) {
  if (model.n_tx() != cfg.n_tx) throw DimensionError("DirectionSystem: model and config disagree on n_tx");
  const PhaseBudget budget = phase_budget(cfg, t_train);
  if (!budget.feasible) throw ConfigError("training length " + std::to_string(t_train) + " violates the energy budget");
  if (t_train < cfg.n_data) throw ConfigError("training length shorter than n_data");
  DirectionSystem s;
  s.psi = model.psi_evals().head(cfg.n_data);
  if (cfg.white_training_noise()) {
    s.sigma2 = RVector::Constant(cfg.n_data, cfg.training_noise_variance());
  } else {
    s.sigma2 = sorted_evd(cfg.training_noise_covariance(t_train), EigenOrder::Ascending).values.head(cfg.n_data);
  }
  s.n_rx = cfg.n_rx;
  s.noise_var = cfg.noise_var;
  s.p_d = budget.data_power;
  return s;
}

double DirectionSystem::gain(int i, double x2) const {
  const double snr = x2 / sigma2(i);
  return n_rx * n_rx * snr * psi(i) / (noise_var / psi(i) + n_rx * noise_var * snr + p_d);
}

RVector DirectionSystem::gains(const RVector& x_powers) const {
  if (x_powers.size() != psi.size()) throw DimensionError("DirectionSystem: x_powers length mismatch");
  RVector h(psi.size());
  for (int i = 0; i < size(); ++i) h(i) = gain(i, x_powers(i));
  return h;
}

RVector DirectionSystem::lambda_sigma(const RVector& x_powers) const { return gains(x_powers) / n_rx; }

std::vector<DirectionParams> DirectionSystem::params(const RVector& f_powers, const RVector& x_powers) const {
  if (f_powers.size() != psi.size() || x_powers.size() != psi.size()) {
    throw DimensionError("DirectionSystem: power vector length mismatch");
  }
  std::vector<DirectionParams> out(static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i) {
    auto& p = out[static_cast<std::size_t>(i)];
    p.a = n_rx * n_rx * f_powers(i) * psi(i) / sigma2(i);
    p.b = n_rx * noise_var / sigma2(i);
    p.c = noise_var / psi(i) + p_d;
    p.h = gain(i, x_powers(i));
  }
  return out;
}

namespace {

void check_training_length(int t_train, int coherence_time) {
  if (t_train < 1 || t_train > coherence_time - 1) {
    throw DomainError("training length " + std::to_string(t_train) + " outside [1, " +
                      std::to_string(coherence_time - 1) + "]");
  }
}

}  // namespace

double effective_mi(const RVector& gains, const RVector& f_powers, int t_train, int coherence_time) {
  check_training_length(t_train, coherence_time);
  if (gains.size() != f_powers.size()) throw DimensionError("effective_mi: length mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < gains.size(); ++i) s += std::log1p(f_powers(i) * gains(i));
  return s * (coherence_time - t_train) / coherence_time;
}

double effective_weighted_mse(const RVector& gains, const RVector& f_powers, const RVector& weights, int t_train,
                              int coherence_time) {
  check_training_length(t_train, coherence_time);
  if (gains.size() != f_powers.size() || gains.size() != weights.size()) {
    throw DimensionError("effective_weighted_mse: length mismatch");
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < gains.size(); ++i) s += weights(i) / (1.0 + f_powers(i) * gains(i));
  return s * coherence_time / (coherence_time - t_train);
}

double effective_mi_matrix(const CMatrix& snr, int t_train, int coherence_time) {
  check_training_length(t_train, coherence_time);
  const CMatrix m = CMatrix::Identity(snr.rows(), snr.cols()) + symmetrize(snr);
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) throw DomainError("effective_mi_matrix: I + S is not positive definite");
  const CMatrix& l = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i).real());
  return logdet * (coherence_time - t_train) / coherence_time;
}

double effective_weighted_mse_matrix(const CMatrix& snr, const CMatrix& w, int t_train, int coherence_time) {
  check_training_length(t_train, coherence_time);
  if (w.rows() != snr.rows() || w.cols() != snr.cols()) throw DimensionError("effective_weighted_mse_matrix: W size");
  const CMatrix m = CMatrix::Identity(snr.rows(), snr.cols()) + symmetrize(snr);
  const CMatrix inv_w = m.ldlt().solve(w);
  return inv_w.trace().real() * coherence_time / (coherence_time - t_train);
}

double effective_objective(const Metric& metric, const RVector& gains, const RVector& f_powers, int t_train,
                           int coherence_time) {
  if (metric.kind == MetricKind::MI) return effective_mi(gains, f_powers, t_train, coherence_time);
  return effective_weighted_mse(gains, f_powers, metric.weights_for(static_cast<int>(gains.size())), t_train,
                                coherence_time);
}

}  // namespace jointopt
