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

#include "dissipode/error.hpp"

namespace dissipode {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianEigenFailure: return "NonHermitianEigenFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionGuardExceeded: return "DimensionGuardExceeded";
    case ErrorCode::NonpositivityViolation: return "NonpositivityViolation";
    case ErrorCode::NotNegativeDefinite: return "NotNegativeDefinite";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::SingularL: return "SingularL";
    case ErrorCode::OracleToleranceTooCoarse: return "OracleToleranceTooCoarse";
    case ErrorCode::InvalidEps: return "InvalidEps";
    case ErrorCode::StepConditionViolated: return "StepConditionViolated";
    case ErrorCode::NoFeasibleStep: return "NoFeasibleStep";
    case ErrorCode::StepCountMismatch: return "StepCountMismatch";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroFinalState: return "ZeroFinalState";
    case ErrorCode::NormExceedsAlpha: return "NormExceedsAlpha";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_hypothesis_violation(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::HypothesisViolated:
    case ErrorCode::StepConditionViolated:
    case ErrorCode::NoFeasibleStep:
    case ErrorCode::NotNegativeDefinite:
    case ErrorCode::NonpositivityViolation:
    case ErrorCode::StepTooLarge:
    case ErrorCode::SingularL:
    case ErrorCode::SingularBlock:
    case ErrorCode::ZeroFinalState:
    case ErrorCode::NormExceedsAlpha:
      return true;
    default:
      return false;
  }
}

}  // namespace dissipode
