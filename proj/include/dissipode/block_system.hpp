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

#include "dissipode/schemes.hpp"
#include "dissipode/solution.hpp"

namespace dissipode {

/// Block lower-bidiagonal all-at-once system of M + Mp block rows:
///
///   row 0             :                I u_0            = u0
///   row j+1, j < M    : -R_j u_j + L_j u_{j+1}          = v_j
///   padding rows      : -u_k     +     u_{k+1}          = 0
///
/// diag_blocks[k] is the coefficient of u_k in row k and sub_blocks[k] is the
/// R block (stored without the minus sign) coupling u_k into row k + 1.
struct AllAtOnceSystem {
  int M = 0;
  int Mp = 1;
  Eigen::Index N = 0;
  double h = 0.0;
  SchemeKind scheme;
  std::vector<Matrix> diag_blocks;  // M + Mp
  std::vector<Matrix> sub_blocks;   // M + Mp - 1
  std::vector<Vector> rhs_blocks;   // M + Mp

  int block_rows() const noexcept { return M + Mp; }
  Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(M + Mp) * N; }
  /// Dense realization; throws DimensionGuardExceeded above kDenseGuard.
  Matrix dense() const;
  Vector dense_rhs() const;
};

/// Assembles the padded system from step_operators. Requires M h == T to
/// within 1e-12 relative and Mp >= 1.
AllAtOnceSystem assemble(const DissipativeOdeProblem& problem, const SchemeKind& scheme, int M,
                         int Mp, double h);

/// Block forward substitution; padding blocks are copies of u_M. The
/// relative residual ||A x - b|| / ||b|| is computed block-wise.
SolutionBundle forward_solve(const AllAtOnceSystem& system);

/// Block (i, j) of the inverse: P_{i-1} ... P_j L_{j-1}^{-1} for i >= j,
/// with P_l = L_l^{-1} R_l, L_{-1} = I, and zero for i < j.
Matrix inverse_block(const AllAtOnceSystem& system, int i, int j);

/// sqrt(max column sum * max row sum) of a nonnegative grid of block norms.
double block_norm_bound(const RealMatrix& norm_grid);

/// Grid of spectral norms of the blocks of a square block matrix.
RealMatrix block_norms(const Matrix& m, Eigen::Index block_size);

struct HypothesisCheck {
  bool pass = true;
  int worst_step = -1;
  double worst_error = 0.0;
  double threshold = 0.0;
  int first_violation = -1;
  std::vector<double> e_prop;
};

/// Measures e_prop = ||L_j^-1 R_j - U(jh, (j+1)h)|| for every evolution step
/// and compares it against 0.5 eta h exp(-eta h). Also requires eta h <= 1.
HypothesisCheck check_lemma_hypothesis(const DissipativeOdeProblem& problem,
                                       const AllAtOnceSystem& system, double oracle_tol = 1e-11);

struct KappaBound {
  double norm_bound = 0.0;
  double inv_bound = 0.0;
  double kappa = 0.0;
};

/// Block extremes over all rows, including padding and L_{-1} = I.
struct BlockExtremes {
  double max_L = 0.0;
  double max_R = 0.0;
  double max_L_inv = 0.0;
};
BlockExtremes block_extremes(const AllAtOnceSystem& system);

/// The lemma's closed form, without checking its hypothesis.
KappaBound kappa_bound_formula(const AllAtOnceSystem& system, double eta, double T);

/// The lemma's closed form after verifying the hypothesis; throws
/// HypothesisViolated naming the first offending step.
KappaBound kappa_bound(const DissipativeOdeProblem& problem, const AllAtOnceSystem& system,
                       double oracle_tol = 1e-11);

/// sigma_max / sigma_min of the dense system.
double kappa_exact(const AllAtOnceSystem& system);

}  // namespace dissipode
