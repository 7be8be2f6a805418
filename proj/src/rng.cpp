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

#include "jointopt/rng.hpp"

#include <cmath>

namespace jointopt {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(mix_seed(stream)),
                    static_cast<std::uint32_t>(mix_seed(stream) >> 32)};
  engine_.seed(seq);
}

cplx Rng::complex_normal() {
  static const double half = std::sqrt(0.5);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {half * re, half * im};
}

CMatrix Rng::complex_gaussian(Eigen::Index n_rows, Eigen::Index n_cols) {
  CMatrix m(n_rows, n_cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index c = 0; c < n_cols; ++c)
    for (Eigen::Index r = 0; r < n_rows; ++r) m(r, c) = complex_normal();
  return m;
}

}  // namespace jointopt
