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

// LMMSE channel estimation and the closed-form error / estimated-channel
// covariance algebra for pilot-aided MIMO training.
//
// Conventions: H is N_R x N_T, the training matrix X is N_T x T_T, and the
// training noise N (N_R x T_T) satisfies E{N^H N} = R_N. The per-receive-
// antenna error covariance is
//
//   Phi = (Psi^{-1} + N_R X R_N^{-1} X^H)^{-1},
//
// so E{dH^H dH} = N_R Phi and E{Hhat^H Hhat} = Pi = N_R (Psi - Phi).

#pragma once

#include "jointopt/channel_model.hpp"

namespace jointopt {

struct TrainingDesign {
  RVector x_powers;  // length N_T, training power per eigen-direction of Psi
  int t_train = 0;
  int n_rx = 0;
  CMatrix x_matrix;  // N_T x T_T
  CMatrix r_n;       // T_T x T_T
  CMatrix phi;       // N_T x N_T
  CMatrix pi_mat;    // N_T x N_T
  CMatrix g_e;       // T_T x N_T LMMSE filter
  CMatrix noise_row_sqrt;  // (R_N / N_R)^{1/2}, used to draw noise rows
};

struct EstimationOutput {
  CMatrix h_hat;
  CMatrix g_e;
  CMatrix error_cov_theoretical;  // N_R Phi
};

/// G_E = (X^H R_H X + R_N)^{-1} X^H R_H. The inner solve is rejected with
/// NumericError when its condition number exceeds 1e12.
CMatrix lmmse_filter(const CMatrix& x_matrix, const CMatrix& r_h, const CMatrix& r_n);

/// Assembles Phi, Pi and G_E for an arbitrary training matrix.
TrainingDesign make_training(const CorrelatedChannelModel& model, const CMatrix& x_matrix, const CMatrix& r_n,
                             int n_rx);

/// Structured optimal training X = U_Psi Lambda_X U_RN^H. Direction i (i-th
/// largest psi) is sent on the eigenvector of R_N with the i-th smallest
/// eigenvalue, with amplitude sqrt(x_powers[i]). Directions with index >=
/// t_train cannot be excited; giving them power is a DomainError.
TrainingDesign build_training(const CorrelatedChannelModel& model, const CMatrix& r_n, const RVector& x_powers,
                              int t_train, int n_rx);

/// E_MSE = N_R (Psi^{-1} + N_R X R_N^{-1} X^H)^{-1}, recomputed from the
/// training's X.
CMatrix error_covariance(const TrainingDesign& training, const CorrelatedChannelModel& model, const CMatrix& r_n);

/// Training powers minimizing Tr(Phi) over the structured class with
/// sum x_i^2 <= budget:
///   x_i^2 = ( sqrt(g_i / mu) / g_i - 1 / (g_i psi_i) )^+,  g_i = N_R / sigma_i^2,
/// with mu found by bisection. Returns a length-N_T vector; directions beyond
/// R_N's dimension get zero.
RVector training_power_mse_waterfill(const CorrelatedChannelModel& model, const CMatrix& r_n, int n_rx,
                                     double budget);

/// Draws training noise, forms Y = H X + N and applies the cached LMMSE filter.
EstimationOutput estimate(const ChannelRealization& realization, const TrainingDesign& training, Rng& rng);

}  // namespace jointopt
