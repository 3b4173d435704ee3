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

#include "dissipode/block_system.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dissipode/error.hpp"
#include "dissipode/reference_oracle.hpp"

namespace dissipode {

namespace {

void check_guard(Eigen::Index dim) {
  if (dim > kDenseGuard) {
    throw Error(ErrorCode::DimensionGuardExceeded,
                "dense dimension " + std::to_string(dim) + " exceeds the guard " +
                    std::to_string(kDenseGuard));
  }
}

}  // namespace

Matrix AllAtOnceSystem::dense() const {
  check_guard(dimension());
  Matrix a = Matrix::Zero(dimension(), dimension());
  for (int k = 0; k < block_rows(); ++k) {
    a.block(k * N, k * N, N, N) = diag_blocks[static_cast<std::size_t>(k)];
    if (k > 0) a.block(k * N, (k - 1) * N, N, N) = -sub_blocks[static_cast<std::size_t>(k - 1)];
  }
  return a;
}

Vector AllAtOnceSystem::dense_rhs() const {
  Vector b(dimension());
  for (int k = 0; k < block_rows(); ++k) b.segment(k * N, N) = rhs_blocks[static_cast<std::size_t>(k)];
  return b;
}

AllAtOnceSystem assemble(const DissipativeOdeProblem& problem, const SchemeKind& scheme, int M,
                         int Mp, double h) {
  if (M < 1) throw Error(ErrorCode::StepCountMismatch, "M must be at least 1");
  if (Mp < 1) throw Error(ErrorCode::StepCountMismatch, "Mp must be at least 1");
  const double T = problem.horizon();
  if (std::abs(M * h - T) > 1e-12 * T) {
    throw Error(ErrorCode::StepCountMismatch, "M*h = " + std::to_string(M * h) +
                                                  " does not match T = " + std::to_string(T));
  }
  const Eigen::Index n = problem.dim();
  const Matrix id = Matrix::Identity(n, n);
  AllAtOnceSystem s;
  s.M = M;
  s.Mp = Mp;
  s.N = n;
  s.h = h;
  s.scheme = scheme;
  const auto rows = static_cast<std::size_t>(M + Mp);
  s.diag_blocks.reserve(rows);
  s.sub_blocks.reserve(rows - 1);
  s.rhs_blocks.reserve(rows);
  s.diag_blocks.push_back(id);
  s.rhs_blocks.push_back(problem.u0());
  for (int j = 0; j < M; ++j) {
    auto ops = step_operators(problem, scheme, j, h);
    s.diag_blocks.push_back(std::move(ops.L));
    s.sub_blocks.push_back(std::move(ops.R));
    s.rhs_blocks.push_back(std::move(ops.v));
  }
  for (int k = 1; k < Mp; ++k) {
    s.diag_blocks.push_back(id);
    s.sub_blocks.push_back(id);
    s.rhs_blocks.push_back(Vector::Zero(n));
  }
  return s;
}

SolutionBundle forward_solve(const AllAtOnceSystem& system) {
  SolutionBundle out;
  out.h = system.h;
  out.M = system.M;
  out.Mp = system.Mp;
  const auto rows = static_cast<std::size_t>(system.block_rows());
  out.blocks.reserve(rows);
  out.blocks.push_back(solve_block(system.diag_blocks[0], system.rhs_blocks[0]));
  double res2 = (system.diag_blocks[0] * out.blocks[0] - system.rhs_blocks[0]).squaredNorm();
  double rhs2 = system.rhs_blocks[0].squaredNorm();
  for (std::size_t k = 1; k < rows; ++k) {
    const Vector rhs = system.sub_blocks[k - 1] * out.blocks[k - 1] + system.rhs_blocks[k];
    const bool padding = k > static_cast<std::size_t>(system.M);
    out.blocks.push_back(padding ? out.blocks[k - 1] : solve_block(system.diag_blocks[k], rhs));
    res2 += (system.diag_blocks[k] * out.blocks[k] - rhs).squaredNorm();
    rhs2 += system.rhs_blocks[k].squaredNorm();
  }
  out.residual = rhs2 > 0.0 ? std::sqrt(res2 / rhs2) : std::sqrt(res2);
  out.refresh_norms();
  return out;
}

Matrix inverse_block(const AllAtOnceSystem& system, int i, int j) {
  const int rows = system.block_rows();
  if (i < 0 || j < 0 || i >= rows || j >= rows) {
    throw Error(ErrorCode::IndexOutOfRange, "block index (" + std::to_string(i) + ", " +
                                                std::to_string(j) + ") outside 0.." +
                                                std::to_string(rows - 1));
  }
  const Eigen::Index n = system.N;
  if (i < j) return Matrix::Zero(n, n);
  Matrix b = solve_block(system.diag_blocks[static_cast<std::size_t>(j)], Matrix(Matrix::Identity(n, n)));
  for (int l = j; l < i; ++l) {
    // P_l = L_l^{-1} R_l, where L_l is the diagonal block of row l + 1.
    b = solve_block(system.diag_blocks[static_cast<std::size_t>(l + 1)],
                    Matrix(system.sub_blocks[static_cast<std::size_t>(l)] * b));
  }
  return b;
}

double block_norm_bound(const RealMatrix& g) {
  if (g.rows() != g.cols() || g.size() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "block norm grid must be square and nonempty");
  }
  if ((g.array() < 0.0).any()) throw Error(ErrorCode::ShapeMismatch, "block norms must be >= 0");
  const double col = g.colwise().sum().maxCoeff();
  const double row = g.rowwise().sum().maxCoeff();
  return std::sqrt(col * row);
}

RealMatrix block_norms(const Matrix& m, Eigen::Index bs) {
  if (bs <= 0 || m.rows() != m.cols() || m.rows() % bs != 0) {
    throw Error(ErrorCode::ShapeMismatch, "matrix is not a square grid of blocks");
  }
  const Eigen::Index k = m.rows() / bs;
  RealMatrix g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) g(i, j) = spectral_norm(m.block(i * bs, j * bs, bs, bs));
  }
  return g;
}

HypothesisCheck check_lemma_hypothesis(const DissipativeOdeProblem& problem,
                                       const AllAtOnceSystem& system, double oracle_tol) {
  HypothesisCheck c;
  const double eta = problem.eta();
  c.threshold = contraction_threshold(eta, system.h);
  c.e_prop.reserve(static_cast<std::size_t>(system.M));
  const bool step_ok = eta * system.h <= 1.0 + 1e-12;
  for (int j = 0; j < system.M; ++j) {
    const double t0 = j * system.h;
    const double t1 = (j + 1) * system.h;
    const Matrix u = propagator(problem, t0, t1, oracle_tol).value;
    const Matrix p = solve_block(system.diag_blocks[static_cast<std::size_t>(j + 1)],
                                 system.sub_blocks[static_cast<std::size_t>(j)]);
    const double e = spectral_norm(p - u);
    c.e_prop.push_back(e);
    if (e > c.worst_error || c.worst_step < 0) {
      c.worst_error = e;
      c.worst_step = j;
    }
    if (!(e <= c.threshold) && c.first_violation < 0) c.first_violation = j;
  }
  c.pass = step_ok && c.first_violation < 0;
  if (!step_ok && c.first_violation < 0) c.first_violation = 0;
  return c;
}

BlockExtremes block_extremes(const AllAtOnceSystem& system) {
  BlockExtremes e;
  e.max_L_inv = 1.0;  // L_{-1} = I
  for (const auto& l : system.diag_blocks) {
    e.max_L = std::max(e.max_L, spectral_norm(l));
    const double smin = min_singular_value(l);
    if (!(smin > 0.0)) throw Error(ErrorCode::SingularBlock, "diagonal block is singular");
    e.max_L_inv = std::max(e.max_L_inv, 1.0 / smin);
  }
  for (const auto& r : system.sub_blocks) e.max_R = std::max(e.max_R, spectral_norm(r));
  return e;
}

KappaBound kappa_bound_formula(const AllAtOnceSystem& system, double eta, double T) {
  if (!(eta > 0.0) || !(T > 0.0)) {
    throw Error(ErrorCode::HypothesisViolated, "condition-number bound needs eta > 0 and T > 0");
  }
  const auto e = block_extremes(system);
  KappaBound k;
  k.norm_bound = 2.0 + e.max_L + e.max_R;
  k.inv_bound = (2.0 * std::numbers::e * system.M / (eta * T) + system.Mp) * (1.0 + e.max_L_inv);
  k.kappa = k.norm_bound * k.inv_bound;
  return k;
}

KappaBound kappa_bound(const DissipativeOdeProblem& problem, const AllAtOnceSystem& system,
                       double oracle_tol) {
  const auto c = check_lemma_hypothesis(problem, system, oracle_tol);
  if (!c.pass) {
    const int j = c.first_violation;
    const double e = j >= 0 && j < static_cast<int>(c.e_prop.size()) ? c.e_prop[j] : c.worst_error;
    throw Error(ErrorCode::HypothesisViolated,
                "step " + std::to_string(j) + ": e_prop = " + std::to_string(e) +
                    " exceeds 0.5*eta*h*exp(-eta*h) = " + std::to_string(c.threshold) +
                    " (or eta*h > 1)");
  }
  return kappa_bound_formula(system, problem.eta(), problem.horizon());
}

double kappa_exact(const AllAtOnceSystem& system) {
  check_guard(system.dimension());
  const Matrix a = system.dense();
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace dissipode
