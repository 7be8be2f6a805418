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

#include "jointopt/channel_model.hpp"

#include <cmath>
#include <utility>

namespace jointopt {

CMatrix exponential_correlation(double theta, int n) {
  if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("exponential_correlation: theta must lie in [0, 1)");
  if (n < 1) throw DomainError("exponential_correlation: n must be positive");
  CMatrix psi(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) psi(i, j) = std::pow(theta, std::abs(i - j));
  return psi;
}

CorrelatedChannelModel::CorrelatedChannelModel(CMatrix psi) : psi_(std::move(psi)) {
  evd_ = sorted_evd(psi_);
  if (!(evd_.values(evd_.values.size() - 1) > 0.0)) {
    throw DomainError("CorrelatedChannelModel: psi must be positive definite");
  }
  psi_sqrt_ = hermitian_sqrt(psi_);
}

CorrelatedChannelModel CorrelatedChannelModel::exponential(double theta, int n_tx) {
  return CorrelatedChannelModel(exponential_correlation(theta, n_tx));
}

CorrelatedChannelModel CorrelatedChannelModel::from_config(const ScenarioConfig& cfg) {
  return exponential(cfg.corr_theta, cfg.n_tx);
}

ChannelRealization sample_channel(const CorrelatedChannelModel& model, int n_rx, Rng& rng) {
  ChannelRealization r;
  r.h_white = rng.complex_gaussian(n_rx, model.n_tx());
  r.h = r.h_white * model.psi_sqrt();
  return r;
}

}  // namespace jointopt
