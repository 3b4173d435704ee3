// Copyright 2026 The dissipode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dissipode {

enum class Fault { None, Padding };

struct VerifyOptions {
  std::uint64_t seed = 20240917;
  std::string filter;  // empty runs every suite; otherwise a suite name
  Fault fault = Fault::None;
  int scale = 1;       // multiplies trial counts
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  int checks = 0;
  int failures = 0;
  std::string detail;  // first failing invariant, or a summary
};

/// Suite names in execution order.
const std::vector<std::string>& verification_suites();

/// Runs the randomized invariant suites. Throws ParseError for an unknown
/// filter.
std::vector<SuiteResult> run_verification(const VerifyOptions& options);

}  // namespace dissipode
