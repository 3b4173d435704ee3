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
#include <random>

#include "dissipode/ode_model.hpp"

namespace dissipode {

/// Smooth random dissipative problems
///
///   A(t) = -(eta + r) I + P(t) + i (H0 + cos(omega t) H1)
///   b(t) = b0 + sin(omega t) b1
///
/// with P(t) = r (cos(omega t) P0 + sin(omega t) P1) / sqrt(2), Hermitian
/// P0, P1, H0, H1 of unit spectral norm (H0, H1 then scaled by skew). The
/// Hermitian part of A is <= -eta by construction. alpha_A and alpha_b are
/// the triangle-inequality caps.
struct RandomProblemOptions {
  int N = 2;
  double eta = 1.0;
  double spread = 0.5;  // r
  double skew = 0.5;
  double omega = 1.0;
  double T = 1.0;
  bool inhomogeneous = true;
  double source = 0.5;
};

using Rng = std::mt19937_64;

Matrix random_hermitian(Rng& rng, Eigen::Index n);  // unit spectral norm
Vector random_unit_vector(Rng& rng, Eigen::Index n);
Matrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols);

DissipativeOdeProblem make_random_problem(Rng& rng, const RandomProblemOptions& options);

}  // namespace dissipode
