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

#include "jointopt/channel_estimation.hpp"

#include <algorithm>
#include <cmath>

#include "jointopt/waterfilling.hpp"

namespace jointopt {

CMatrix lmmse_filter(const CMatrix& x_matrix, const CMatrix& r_h, const CMatrix& r_n) {
  if (r_h.rows() != x_matrix.rows() || r_n.rows() != x_matrix.cols()) {
    throw DimensionError("lmmse_filter: inconsistent dimensions");
  }
  const CMatrix xh_rh = x_matrix.adjoint() * r_h;
  return solve_hpd(xh_rh * x_matrix + r_n, xh_rh);
}

TrainingDesign make_training(const CorrelatedChannelModel& model, const CMatrix& x_matrix, const CMatrix& r_n,
                             int n_rx) {
  if (x_matrix.rows() != model.n_tx()) throw DimensionError("make_training: X must have N_T rows");
  if (r_n.rows() != x_matrix.cols() || r_n.cols() != x_matrix.cols()) {
    throw DimensionError("make_training: R_N must be T_T x T_T");
  }
  if (n_rx < 1) throw DomainError("make_training: n_rx must be positive");

  const double nr = static_cast<double>(n_rx);
  const CMatrix& psi = model.psi();
  TrainingDesign t;
  t.t_train = static_cast<int>(x_matrix.cols());
  t.n_rx = n_rx;
  t.x_matrix = x_matrix;
  t.r_n = r_n;

  // Woodbury form of (Psi^{-1} + N_R X R_N^{-1} X^H)^{-1}; no explicit inverse.
  const CMatrix xh_psi = x_matrix.adjoint() * psi;
  const CMatrix inner = xh_psi * x_matrix + r_n / nr;
  const CMatrix reduction = symmetrize(xh_psi.adjoint() * solve_hpd(inner, xh_psi));
  t.phi = symmetrize(psi - reduction);
  t.pi_mat = reduction * nr;
  t.g_e = lmmse_filter(x_matrix, psi * nr, r_n);
  t.noise_row_sqrt = hermitian_sqrt(r_n / nr);

  // Diagonal training powers in the Psi eigenbasis (exact for structured X).
  const CMatrix gram = model.psi_evecs().adjoint() * x_matrix * x_matrix.adjoint() * model.psi_evecs();
  t.x_powers = gram.diagonal().real();
  return t;
}

TrainingDesign build_training(const CorrelatedChannelModel& model, const CMatrix& r_n, const RVector& x_powers,
                              int t_train, int n_rx) {
  const int n_tx = model.n_tx();
  if (x_powers.size() != n_tx) throw DimensionError("build_training: x_powers must have N_T entries");
  if (t_train < 1 || r_n.rows() != t_train) throw DimensionError("build_training: R_N must be t_train x t_train");
  if ((x_powers.array() < 0.0).any()) throw DomainError("build_training: negative training power");
  const Eigen::Index active = (x_powers.array() > 0.0).count();
  if (active > std::min(n_tx, t_train)) throw DomainError("build_training: too many active directions for t_train");

  const Evd noise = sorted_evd(r_n, EigenOrder::Ascending);
  CMatrix x = CMatrix::Zero(n_tx, t_train);
  for (int i = 0; i < n_tx; ++i) {
    if (x_powers(i) <= 0.0) continue;
    if (i >= t_train) throw DomainError("build_training: direction index exceeds training length");
    x += std::sqrt(x_powers(i)) * model.psi_evecs().col(i) * noise.vectors.col(i).adjoint();
  }
  TrainingDesign t = make_training(model, x, r_n, n_rx);
  t.x_powers = x_powers;
  return t;
}

CMatrix error_covariance(const TrainingDesign& training, const CorrelatedChannelModel& model, const CMatrix& r_n) {
  const CMatrix& x = training.x_matrix;
  if (x.rows() != model.n_tx() || r_n.rows() != x.cols()) throw DimensionError("error_covariance: dimension mismatch");
  const double nr = static_cast<double>(training.n_rx);
  const CMatrix xh_psi = x.adjoint() * model.psi();
  const CMatrix reduction = xh_psi.adjoint() * solve_hpd(xh_psi * x + r_n / nr, xh_psi);
  return symmetrize(model.psi() - reduction) * nr;
}

RVector training_power_mse_waterfill(const CorrelatedChannelModel& model, const CMatrix& r_n, int n_rx,
                                     double budget) {
  if (!(budget > 0.0)) throw DomainError("training_power_mse_waterfill: budget must be positive");
  const int n_tx = model.n_tx();
  const RVector sigma2 = sorted_evd(r_n, EigenOrder::Ascending).values;
  const int usable = std::min<int>(n_tx, static_cast<int>(sigma2.size()));
  const RVector& psi = model.psi_evals();

  RVector gain = RVector::Zero(n_tx);
  for (int i = 0; i < usable; ++i) gain(i) = n_rx / sigma2(i);

  auto powers_at = [&](double mu) {
    RVector y = RVector::Zero(n_tx);
    for (int i = 0; i < usable; ++i) {
      y(i) = std::max(0.0, std::sqrt(gain(i) / mu) / gain(i) - 1.0 / (gain(i) * psi(i)));
    }
    return y;
  };
  double mu_hi = 0.0;
  for (int i = 0; i < usable; ++i) mu_hi = std::max(mu_hi, gain(i) * psi(i) * psi(i));
  const double mu = find_multiplier([&](double m) { return powers_at(m).sum(); }, budget, mu_hi);
  return powers_at(mu);
}

EstimationOutput estimate(const ChannelRealization& realization, const TrainingDesign& training, Rng& rng) {
  if (realization.h.cols() != training.x_matrix.rows() || realization.h.rows() != training.n_rx) {
    throw DimensionError("estimate: channel and training dimensions differ");
  }
  const CMatrix noise = rng.complex_gaussian(training.n_rx, training.t_train) * training.noise_row_sqrt;
  const CMatrix y = realization.h * training.x_matrix + noise;
  EstimationOutput out;
  out.h_hat = y * training.g_e;
  out.g_e = training.g_e;
  out.error_cov_theoretical = training.phi * static_cast<double>(training.n_rx);
  return out;
}

}  // namespace jointopt
