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

#include <vector>

#include "dissipode/ode_model.hpp"

namespace dissipode {

// Explicit unitaries for the LCU block-encodings of the Euler and trapezoid
// all-at-once systems. Registers are ordered most significant first:
//
//   [lcu (4)] [flag (2)] [clock (M + Mp)] [system (N)]
//
// and "top-left block" means every projected ancilla (lcu, flag) in |0>.

struct QueryCounts {
  int oa = 0;
  int add = 0;
  int prep = 0;
  int controlled_x = 0;
};

struct EncodedOracle {
  Matrix unitary;
  std::vector<Eigen::Index> ancilla_dims;  // projected registers, outermost first
  Eigen::Index clock_dim = 1;
  Eigen::Index system_dim = 1;
  double factor = 1.0;
  QueryCounts queries;

  /// ||U^dagger U - I|| in the max-entry norm.
  double unitarity_residual() const;
  /// Dimension of the unprojected (clock x system) space.
  Eigen::Index data_dim() const noexcept { return clock_dim * system_dim; }
};

inline constexpr Eigen::Index kEncodingGuard = 1 << 14;

/// [[X, sqrt(I - X X^dag)], [sqrt(I - X^dag X), -X^dag]] with X = m / alpha.
/// Throws NormExceedsAlpha when ||m|| > alpha.
EncodedOracle dilate(const Matrix& m, double alpha);

/// Time-dependent O_A on a clock of size clock_dim: clock values in
/// [lo, hi] carry dilate(A(t h), alpha_A); every other clock value applies X
/// to the flag, one controlled-X each.
EncodedOracle oracle_OA_window(const DissipativeOdeProblem& problem, double h,
                               Eigen::Index clock_dim, int lo, int hi);

/// O_A with window [0, M - 1] on a clock of size M + Mp.
EncodedOracle oracle_OA(const DissipativeOdeProblem& problem, double h, int M, int Mp);

/// Cyclic shift |t> -> |(t + 1) mod (M + Mp)> on the clock register.
EncodedOracle add_operator(int M, int Mp);

/// The map t -> (t + 1) mod (M + Mp - 1) for t = 0..M+Mp-1, as printed. It
/// is not injective on M + Mp labels; kept for inspection.
std::vector<int> printed_add_map(int M, int Mp);

/// Unitary whose first column is the normalized `column`; the rest is filled
/// by Gram-Schmidt against the standard basis.
Matrix complete_to_unitary(const Vector& column);

/// Euler LCU: (I - U2 - alpha h U3) / (2 + alpha h). Needs h alpha_A <= 1.
EncodedOracle euler_block_encoding(const DissipativeOdeProblem& problem, double h, int M, int Mp);

/// Trapezoid LCU: (I - V2 - (alpha h / 2)(V3 + V4)) / (2 + alpha h).
EncodedOracle trapezoidal_block_encoding(const DissipativeOdeProblem& problem, double h, int M,
                                         int Mp);

/// factor * (top-left rows x cols block with all ancillas in |0>).
Matrix extract_top_left(const EncodedOracle& oracle, Eigen::Index rows, Eigen::Index cols);

}  // namespace dissipode
