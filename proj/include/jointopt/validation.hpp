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

// Self-check suites run by `jointopt validate`.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jointopt {

enum class Suite { Estimation, WaterfillOracles, StructureChecks, Convergence };

std::optional<Suite> parse_suite(const std::string& name);
std::string to_string(Suite s);

struct CheckResult {
  std::string suite;
  std::string property;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

ValidationReport run_validation(Suite suite);

/// CSV: suite,property,residual,threshold,verdict
void write_report(std::ostream& os, const ValidationReport& report);

}  // namespace jointopt
