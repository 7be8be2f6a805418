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

#pragma once

#include "jointopt/linalg.hpp"
#include "jointopt/rng.hpp"
#include "jointopt/scenario.hpp"

namespace jointopt {

/// [Psi]_{ij} = theta^|i-j|. Throws DomainError unless 0 <= theta < 1.
CMatrix exponential_correlation(double theta, int n);

/// Transmit-correlated Rayleigh channel H = H_W Psi^{1/2}, with Psi's
/// eigen-structure cached in descending order.
class CorrelatedChannelModel {
 public:
  /// Throws DomainError unless psi is Hermitian positive definite.
  explicit CorrelatedChannelModel(CMatrix psi);

  static CorrelatedChannelModel exponential(double theta, int n_tx);
  static CorrelatedChannelModel from_config(const ScenarioConfig& cfg);

  int n_tx() const { return static_cast<int>(psi_.rows()); }
  const CMatrix& psi() const { return psi_; }
  const CMatrix& psi_evecs() const { return evd_.vectors; }
  const RVector& psi_evals() const { return evd_.values; }
  const CMatrix& psi_sqrt() const { return psi_sqrt_; }

 private:
  CMatrix psi_;
  Evd evd_;
  CMatrix psi_sqrt_;
};

struct ChannelRealization {
  CMatrix h_white;  // N_R x N_T, i.i.d. CN(0, 1)
  CMatrix h;        // h_white * Psi^{1/2}
};

ChannelRealization sample_channel(const CorrelatedChannelModel& model, int n_rx, Rng& rng);

}  // namespace jointopt
