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

// Minimal fork-join helpers. Work is split into contiguous chunks and every
// result lands in a caller-owned slot, so reductions done afterwards see the
// same values in the same order for any thread count.

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace jointopt {

/// Environment variable consulted for the default worker count.
inline constexpr const char* kThreadsEnvVar = "JOINTOPT_THREADS";

/// Worker count: explicit override if set, else $JOINTOPT_THREADS, else
/// std::thread::hardware_concurrency().
std::size_t thread_count();

/// Programmatic override; 0 restores the environment/hardware default.
void set_thread_count(std::size_t n);

/// Calls body(begin, end) over disjoint chunks of [0, n). Exceptions thrown by
/// any chunk are rethrown on the calling thread after all workers join.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Fixed-tree pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace jointopt
