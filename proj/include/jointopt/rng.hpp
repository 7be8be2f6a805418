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

#include <cstdint>
#include <random>

#include "jointopt/types.hpp"

namespace jointopt {

/// Seeded generator for one Monte Carlo stream. Streams are addressed by
/// (seed, index) so parallel trials draw the same numbers regardless of how
/// they are scheduled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double normal() { return normal_(engine_); }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  cplx complex_normal();

  /// n_rows x n_cols matrix of i.i.d. complex_normal() entries.
  CMatrix complex_gaussian(Eigen::Index n_rows, Eigen::Index n_cols);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to decorrelate derived stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace jointopt
