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

#include <complex>

#include <Eigen/Dense>

namespace dissipode {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

// Dense guard shared by every routine that materializes an O(n^2) matrix and
// runs an O(n^3) factorization on it.
inline constexpr long kDenseGuard = 4096;

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Smallest singular value (0 for an empty matrix).
double min_singular_value(const Matrix& m);

/// (m + m^dagger) / 2
Matrix hermitian_part(const Matrix& m);

/// Largest eigenvalue of a Hermitian matrix. Throws NonHermitianEigenFailure
/// when the eigensolver does not converge.
double max_eigenvalue_hermitian(const Matrix& h);

/// Largest eigenvalue of (m + m^dagger)/2, i.e. the logarithmic 2-norm.
double log_norm(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

/// Solves l * x = rhs; throws SingularBlock if l is numerically singular.
Matrix solve_block(const Matrix& l, const Matrix& rhs);
Vector solve_block(const Matrix& l, const Vector& rhs);

/// sigma_max / sigma_min via SVD.
double condition_number(const Matrix& m);

}  // namespace dissipode
