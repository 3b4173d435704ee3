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

#include "dissipode/ode_model.hpp"
#include "dissipode/solution.hpp"

namespace dissipode {

// Ground truth by classical RK4 with step doubling. Each refinement level
// doubles the step count; once two successive levels agree to tol/4 the
// finer result is Richardson-extrapolated and returned with an estimate
// of its error. Integration never crosses a declared breakpoint.

inline constexpr double kMinOracleTol = 1e-13;

struct OracleMatrix {
  Matrix value;
  double error_estimate = 0.0;
  long steps = 0;
};

struct OracleVector {
  Vector value;
  double error_estimate = 0.0;
  long steps = 0;
};

/// Time-ordered exponential from t0 to t1 (t0 <= t1).
OracleMatrix propagator(const DissipativeOdeProblem& problem, double t0, double t1, double tol);

/// int_{jh}^{(j+1)h} U(s, (j+1)h) b(s) ds, computed as the value at (j+1)h of
/// w' = A w + b, w(jh) = 0.
OracleVector duhamel_integral(const DissipativeOdeProblem& problem, int j, double h, double tol);

/// Solution of the inhomogeneous flow from (t0, u) to t1.
OracleVector evolve(const DissipativeOdeProblem& problem, double t0, double t1, const Vector& u,
                    double tol);

/// u(kh) for k = 0..M, chained one step at a time; Mp = 1.
SolutionBundle exact_history(const DissipativeOdeProblem& problem, int M, double h, double tol);

/// Max of ||u(t)|| on a uniform grid of `points` times including 0 and T.
double max_state_norm(const DissipativeOdeProblem& problem, int points, double tol);

/// Default oracle tolerance min(1e-10, eps/100), floored at kMinOracleTol.
double default_oracle_tol(double eps);

}  // namespace dissipode
