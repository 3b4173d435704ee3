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

#include "dissipode/block_encoding.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "dissipode/error.hpp"

namespace dissipode {

namespace {

constexpr double kUnitaryTol = 1e-10;

void check_unitary(const EncodedOracle& o, const char* what) {
  const double r = o.unitarity_residual();
  if (!(r <= kUnitaryTol)) {
    throw Error(ErrorCode::NotUnitary,
                std::string(what) + " is not unitary (residual " + std::to_string(r) + ")");
  }
}

void check_guard(Eigen::Index clock, Eigen::Index n, Eigen::Index ancilla) {
  if (clock * n * ancilla > kEncodingGuard) {
    throw Error(ErrorCode::DimensionGuardExceeded,
                "encoding dimension " + std::to_string(clock * n * ancilla) +
                    " exceeds the guard " + std::to_string(kEncodingGuard));
  }
}

// X on the flag register, identity elsewhere: [[0, I], [I, 0]] on (flag, rest).
Matrix flag_flip(Eigen::Index rest) {
  Matrix u = Matrix::Zero(2 * rest, 2 * rest);
  u.block(0, rest, rest, rest).setIdentity();
  u.block(rest, 0, rest, rest).setIdentity();
  return u;
}

// Embeds a per-clock (flag, system) unitary into (flag, clock, system).
void place_clock_block(Matrix& u, const Matrix& d, Eigen::Index t, Eigen::Index clock,
                       Eigen::Index n) {
  const Eigen::Index half = clock * n;
  for (int f = 0; f < 2; ++f) {
    for (int g = 0; g < 2; ++g) {
      u.block(f * half + t * n, g * half + t * n, n, n) = d.block(f * n, g * n, n, n);
    }
  }
}

Matrix clock_shift(Eigen::Index clock) {
  Matrix p = Matrix::Zero(clock, clock);
  for (Eigen::Index t = 0; t < clock; ++t) p((t + 1) % clock, t) = 1.0;
  return p;
}

// I_flag (x) P_clock (x) I_system.
Matrix add_full(Eigen::Index clock, Eigen::Index n) {
  return kron(Matrix::Identity(2, 2), kron(clock_shift(clock), Matrix::Identity(n, n)));
}

// Flag flip controlled on clock == 0.
Matrix flip_on_clock_zero(Eigen::Index clock, Eigen::Index n) {
  const Eigen::Index half = clock * n;
  Matrix u = Matrix::Identity(2 * half, 2 * half);
  u.block(0, 0, n, n).setZero();
  u.block(half, half, n, n).setZero();
  u.block(0, half, n, n).setIdentity();
  u.block(half, 0, n, n).setIdentity();
  return u;
}

// (prep^T (x) I) sel (prep (x) I), sel = sum_k |k><k| (x) U_k.
Matrix lcu(const Matrix& prep, const std::vector<Matrix>& branches) {
  const Eigen::Index inner = branches.front().rows();
  const Eigen::Index k = prep.rows();
  Matrix sel = Matrix::Zero(k * inner, k * inner);
  for (Eigen::Index i = 0; i < k; ++i) sel.block(i * inner, i * inner, inner, inner) = branches[i];
  const Matrix id = Matrix::Identity(inner, inner);
  return kron(prep.transpose(), id) * sel * kron(prep, id);
}

}  // namespace

double EncodedOracle::unitarity_residual() const {
  const Matrix r = unitary.adjoint() * unitary - Matrix::Identity(unitary.cols(), unitary.cols());
  return r.cwiseAbs().maxCoeff();
}

EncodedOracle dilate(const Matrix& m, double alpha) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "dilation needs a square block");
  if (!(alpha > 0.0)) throw Error(ErrorCode::NormExceedsAlpha, "alpha must be positive");
  const double nm = spectral_norm(m);
  if (nm > alpha * (1.0 + 1e-12)) {
    throw Error(ErrorCode::NormExceedsAlpha, "||m|| = " + std::to_string(nm) +
                                                 " exceeds alpha = " + std::to_string(alpha));
  }
  const Eigen::Index n = m.rows();
  const Matrix x = m / alpha;
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd c = (1.0 - svd.singularValues().array().square()).max(0.0).sqrt();
  const Matrix& U = svd.matrixU();
  const Matrix& V = svd.matrixV();
  EncodedOracle o;
  o.unitary.resize(2 * n, 2 * n);
  o.unitary.block(0, 0, n, n) = x;
  o.unitary.block(0, n, n, n) = U * c.cast<cplx>().asDiagonal() * U.adjoint();
  o.unitary.block(n, 0, n, n) = V * c.cast<cplx>().asDiagonal() * V.adjoint();
  o.unitary.block(n, n, n, n) = -x.adjoint();
  o.ancilla_dims = {2};
  o.clock_dim = 1;
  o.system_dim = n;
  o.factor = alpha;
  check_unitary(o, "dilation");
  return o;
}

EncodedOracle oracle_OA_window(const DissipativeOdeProblem& problem, double h,
                               Eigen::Index clock_dim, int lo, int hi) {
  const Eigen::Index n = problem.dim();
  check_guard(clock_dim, n, 8);
  const double alpha = problem.alpha_A();
  EncodedOracle o;
  o.unitary = Matrix::Zero(2 * clock_dim * n, 2 * clock_dim * n);
  const Matrix flip = flag_flip(n);
  for (Eigen::Index t = 0; t < clock_dim; ++t) {
    if (t >= lo && t <= hi) {
      place_clock_block(o.unitary, dilate(problem.A(static_cast<double>(t) * h), alpha).unitary, t,
                        clock_dim, n);
    } else {
      place_clock_block(o.unitary, flip, t, clock_dim, n);
      ++o.queries.controlled_x;
    }
  }
  o.ancilla_dims = {2};
  o.clock_dim = clock_dim;
  o.system_dim = n;
  o.factor = alpha;
  o.queries.oa = 1;
  check_unitary(o, "O_A");
  return o;
}

EncodedOracle oracle_OA(const DissipativeOdeProblem& problem, double h, int M, int Mp) {
  if (M < 1 || Mp < 1) throw Error(ErrorCode::StepCountMismatch, "M and Mp must be >= 1");
  return oracle_OA_window(problem, h, M + Mp, 0, M - 1);
}

EncodedOracle add_operator(int M, int Mp) {
  if (M < 1 || Mp < 1) throw Error(ErrorCode::StepCountMismatch, "M and Mp must be >= 1");
  EncodedOracle o;
  o.unitary = clock_shift(M + Mp);
  o.ancilla_dims = {};
  o.clock_dim = M + Mp;
  o.system_dim = 1;
  o.factor = 1.0;
  o.queries.add = 1;
  return o;
}

std::vector<int> printed_add_map(int M, int Mp) {
  const int mod = M + Mp - 1;
  std::vector<int> out;
  for (int t = 0; t < M + Mp; ++t) out.push_back(mod > 0 ? (t + 1) % mod : 0);
  return out;
}

Matrix complete_to_unitary(const Vector& column) {
  const Eigen::Index k = column.size();
  if (column.norm() == 0.0) throw Error(ErrorCode::ShapeMismatch, "cannot complete a zero column");
  Matrix q(k, k);
  q.col(0) = column / column.norm();
  Eigen::Index filled = 1;
  for (Eigen::Index e = 0; e < k && filled < k; ++e) {
    Vector v = Vector::Unit(k, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < filled; ++c) v -= q.col(c).dot(v) * q.col(c);
    }
    if (v.norm() > 1e-8) q.col(filled++) = v / v.norm();
  }
  return q;
}

EncodedOracle euler_block_encoding(const DissipativeOdeProblem& problem, double h, int M, int Mp) {
  if (M < 1 || Mp < 1) throw Error(ErrorCode::StepCountMismatch, "M and Mp must be >= 1");
  const double ah = problem.alpha_A() * h;
  if (!(ah > 0.0) || ah > 1.0 + 1e-12) {
    throw Error(ErrorCode::StepTooLarge, "Euler encoding needs 0 < h*alpha_A <= 1");
  }
  const Eigen::Index clock = M + Mp;
  const Eigen::Index n = problem.dim();
  check_guard(clock, n, 8);
  const Matrix add = add_full(clock, n);

  const Matrix u2 = flip_on_clock_zero(clock, n) * add;
  const auto oa = oracle_OA(problem, h, M, Mp);
  const Matrix u3 = add * oa.unitary;
  const Matrix id = Matrix::Identity(2 * clock * n, 2 * clock * n);

  Vector col(4);
  col << 1.0, kI, kI * std::sqrt(ah), 0.0;
  col /= std::sqrt(2.0 + ah);
  const Matrix prep = complete_to_unitary(col);

  EncodedOracle o;
  o.unitary = lcu(prep, {id, u2, u3, id});
  o.ancilla_dims = {4, 2};
  o.clock_dim = clock;
  o.system_dim = n;
  o.factor = 2.0 + ah;
  o.queries.oa = oa.queries.oa;
  o.queries.add = 2;
  o.queries.prep = 2;
  o.queries.controlled_x = 1 + oa.queries.controlled_x;
  check_unitary(o, "Euler LCU");
  return o;
}

EncodedOracle trapezoidal_block_encoding(const DissipativeOdeProblem& problem, double h, int M,
                                         int Mp) {
  if (M < 1 || Mp < 1) throw Error(ErrorCode::StepCountMismatch, "M and Mp must be >= 1");
  const double ah = problem.alpha_A() * h;
  if (!(ah > 0.0) || ah > 1.0 + 1e-12) {
    throw Error(ErrorCode::StepTooLarge, "trapezoid encoding needs 0 < h*alpha_A <= 1");
  }
  const Eigen::Index clock = M + Mp;
  const Eigen::Index n = problem.dim();
  check_guard(clock, n, 8);
  const Matrix add = add_full(clock, n);

  const Matrix v2 = flip_on_clock_zero(clock, n) * add;
  const auto oa_sub = oracle_OA_window(problem, h, clock, 0, M - 1);
  const Matrix v3 = add * oa_sub.unitary;
  const auto oa_diag = oracle_OA_window(problem, h, clock, 1, M);
  const Matrix& v4 = oa_diag.unitary;
  const Matrix id = Matrix::Identity(2 * clock * n, 2 * clock * n);

  Vector col(4);
  col << 1.0, kI, kI * std::sqrt(ah / 2.0), kI * std::sqrt(ah / 2.0);
  col /= std::sqrt(2.0 + ah);
  const Matrix prep = complete_to_unitary(col);

  EncodedOracle o;
  o.unitary = lcu(prep, {id, v2, v3, v4});
  o.ancilla_dims = {4, 2};
  o.clock_dim = clock;
  o.system_dim = n;
  o.factor = 2.0 + ah;
  o.queries.oa = oa_sub.queries.oa + oa_diag.queries.oa;
  o.queries.add = 2;
  o.queries.prep = 2;
  o.queries.controlled_x = 1 + oa_sub.queries.controlled_x + oa_diag.queries.controlled_x;
  check_unitary(o, "trapezoid LCU");
  return o;
}

Matrix extract_top_left(const EncodedOracle& oracle, Eigen::Index rows, Eigen::Index cols) {
  Eigen::Index anc = 1;
  for (auto d : oracle.ancilla_dims) anc *= d;
  const Eigen::Index block = oracle.unitary.rows() / anc;
  if (rows < 0 || cols < 0 || rows > block || cols > block) {
    throw Error(ErrorCode::ShapeMismatch, "requested " + std::to_string(rows) + "x" +
                                              std::to_string(cols) + " exceeds the " +
                                              std::to_string(block) + "-dimensional block");
  }
  return oracle.factor * oracle.unitary.block(0, 0, rows, cols);
}

}  // namespace dissipode
