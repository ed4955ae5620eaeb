// Copyright 2026 The vsa-tensor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vsa {

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Test hook: replaces binding with an affine (non-multilinear) map in the
  /// multilinearity check so the harness can be shown to fail.
  bool corrupt_binding = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every library invariant at desk-scale parameters.
std::vector<CheckResult> run_invariant_suite(const VerifyOptions& options);

/// Pass/fail table followed by "checks run / passed / failed" counts.
void print_report(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace vsa
