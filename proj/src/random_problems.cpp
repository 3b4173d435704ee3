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

#include "dissipode/random_problems.hpp"

#include <cmath>
#include <numbers>

namespace dissipode {

Matrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
  }
  return m;
}

Matrix random_hermitian(Rng& rng, Eigen::Index n) {
  const Matrix g = random_complex(rng, n, n);
  Matrix h = hermitian_part(g);
  const double s = spectral_norm(h);
  return s > 0.0 ? Matrix(h / s) : h;
}

Vector random_unit_vector(Rng& rng, Eigen::Index n) {
  Vector v = random_complex(rng, n, 1);
  return v / v.norm();
}

DissipativeOdeProblem make_random_problem(Rng& rng, const RandomProblemOptions& o) {
  const Eigen::Index n = o.N;
  const Matrix p0 = random_hermitian(rng, n);
  const Matrix p1 = random_hermitian(rng, n);
  const Matrix h0 = o.skew * random_hermitian(rng, n);
  const Matrix h1 = o.skew * random_hermitian(rng, n);
  const Vector u0 = random_unit_vector(rng, n);
  Vector b0 = random_complex(rng, n, 1);
  Vector b1 = random_complex(rng, n, 1);
  b0 *= o.source / b0.norm();
  b1 *= 0.5 * o.source / b1.norm();

  const double r = o.spread;
  const double shift = o.eta + r;
  const double w = o.omega;
  DissipativeOdeProblem::Params p;
  p.dim = n;
  p.A = [=](double t) -> Matrix {
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    Matrix a = (r / std::numbers::sqrt2) * (c * p0 + s * p1) + kI * (h0 + c * h1);
    a.diagonal().array() -= shift;
    return a;
  };
  if (o.inhomogeneous) {
    p.b = [=](double t) -> Vector { return b0 + std::sin(w * t) * b1; };
    p.alpha_b = b0.norm() + b1.norm();
  }
  p.u0 = u0;
  p.T = o.T;
  p.eta = o.eta;
  p.alpha_A = shift + r + spectral_norm(h0) + spectral_norm(h1);
  p.label = "random";
  return DissipativeOdeProblem(std::move(p));
}

}  // namespace dissipode
