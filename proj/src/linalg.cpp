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

#include "dissipode/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dissipode/error.hpp"

namespace dissipode {

namespace {

Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.rows() <= 16 && m.cols() <= 16) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues();
  }
  return Eigen::BDCSVD<Matrix>(m).singularValues();
}

}  // namespace

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  return singular_values(m)(0);
}

double min_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const auto sv = singular_values(m);
  return sv(sv.size() - 1);
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double max_eigenvalue_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian eigensolve needs a square matrix");
  }
  if (h.rows() == 1) return h(0, 0).real();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonHermitianEigenFailure, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues().maxCoeff();
}

double log_norm(const Matrix& m) { return max_eigenvalue_hermitian(hermitian_part(m)); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

void check_invertible(const Matrix& l) {
  if (l.rows() != l.cols()) throw Error(ErrorCode::DimensionMismatch, "block is not square");
  if (min_singular_value(l) <= 1e-12 * std::max(1.0, spectral_norm(l))) {
    throw Error(ErrorCode::SingularBlock, "diagonal block is numerically singular");
  }
}

bool is_identity(const Matrix& l) { return l.isIdentity(0.0); }

}  // namespace

Matrix solve_block(const Matrix& l, const Matrix& rhs) {
  if (is_identity(l)) return rhs;
  check_invertible(l);
  return l.partialPivLu().solve(rhs);
}

Vector solve_block(const Matrix& l, const Vector& rhs) {
  if (is_identity(l)) return rhs;
  check_invertible(l);
  return l.partialPivLu().solve(rhs);
}

double condition_number(const Matrix& m) {
  const auto sv = singular_values(m);
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace dissipode
