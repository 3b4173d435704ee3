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

#include <stdexcept>
#include <string>
#include <string_view>

namespace dissipode {

enum class ErrorCode {
  // ode_model
  NonHermitianEigenFailure,
  DimensionMismatch,
  DimensionGuardExceeded,
  NonpositivityViolation,
  NotNegativeDefinite,
  InvalidProblem,
  // schemes
  StepTooLarge,
  SingularL,
  OracleToleranceTooCoarse,
  InvalidEps,
  StepConditionViolated,
  NoFeasibleStep,
  // block_system
  StepCountMismatch,
  SingularBlock,
  IndexOutOfRange,
  HypothesisViolated,
  // reference_oracle
  ToleranceUnreachable,
  // analysis
  ShapeMismatch,
  ZeroFinalState,
  // block_encoding
  NormExceedsAlpha,
  NotUnitary,
  // io / config
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors that signal a violated mathematical hypothesis rather than
/// a usage or IO problem. The CLI maps these to exit code 2.
bool is_hypothesis_violation(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dissipode
