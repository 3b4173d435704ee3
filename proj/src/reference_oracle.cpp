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

#include "dissipode/reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dissipode/error.hpp"

namespace dissipode {

namespace {

constexpr long kMaxSteps = 1L << 22;

void check_request(double t0, double t1, double tol) {
  if (!(tol >= kMinOracleTol)) {
    throw Error(ErrorCode::ToleranceUnreachable,
                "oracle tolerance " + std::to_string(tol) + " is below the floor 1e-13");
  }
  if (!(t0 <= t1) || t0 < 0.0) {
    throw Error(ErrorCode::InvalidProblem, "propagator interval must satisfy 0 <= t0 <= t1");
  }
}

std::vector<double> segments(const DissipativeOdeProblem& problem, double t0, double t1) {
  std::vector<double> cuts{t0};
  for (double bp : problem.breakpoints()) {
    if (bp > t0 && bp < t1) cuts.push_back(bp);
  }
  cuts.push_back(t1);
  return cuts;
}

// Classical RK4 for Y' = A(t) Y (+ b(t) when `source`), with `n` steps spread
// over the breakpoint segments in proportion to their length. Evaluation
// times are kept strictly inside each segment's half-open interval so that
// piecewise data is read from the correct piece.
Matrix rk4(const DissipativeOdeProblem& problem, const std::vector<double>& cuts, Matrix y,
           bool source, long n) {
  const double total = cuts.back() - cuts.front();
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    if (b <= a) continue;
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(n * (b - a) / total - 1e-9)));
    const double dt = (b - a) / steps;
    const double last = std::nextafter(b, a);
    auto f = [&](double t, const Matrix& yy) -> Matrix {
      const double te = std::min(t, last);
      Matrix out = problem.A(te) * yy;
      if (source) out.col(0) += problem.b(te);
      return out;
    };
    for (long k = 0; k < steps; ++k) {
      const double t = a + k * dt;
      const Matrix k1 = f(t, y);
      const Matrix k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
      const Matrix k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
      const Matrix k4 = f(t + dt, y + dt * k3);
      y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return y;
}

double diff_norm(const Matrix& a, const Matrix& b) {
  if (a.cols() == 1) return (a - b).norm();
  return spectral_norm(a - b);
}

struct Refined {
  Matrix value;
  double error;
  long steps;
};

Refined refine(const DissipativeOdeProblem& problem, double t0, double t1, const Matrix& y0,
               bool source, double tol) {
  const auto cuts = segments(problem, t0, t1);
  if (t1 == t0) return {y0, 0.0, 0};
  const double span = t1 - t0;
  long n = std::max<long>(static_cast<long>(cuts.size()) - 1,
                          static_cast<long>(std::ceil(2.0 * problem.alpha_A() * span)));
  n = std::max<long>(n, 2);
  Matrix prev = rk4(problem, cuts, y0, source, n);
  double prev_diff = std::numeric_limits<double>::infinity();
  int stalls = 0;
  while (true) {
    n *= 2;
    if (n > kMaxSteps) {
      throw Error(ErrorCode::ToleranceUnreachable,
                  "step cap reached before tolerance " + std::to_string(tol));
    }
    Matrix cur = rk4(problem, cuts, y0, source, n);
    const double d = diff_norm(cur, prev);
    if (d <= tol / 4.0) {
      Matrix extrapolated = cur + (cur - prev) / 15.0;
      return {std::move(extrapolated), d / 15.0, n};
    }
    // Once RK4 is in its asymptotic regime each doubling cuts the difference
    // by ~16; a ratio near 1 means round-off dominates.
    stalls = (d > 0.5 * prev_diff) && n >= 64 ? stalls + 1 : 0;
    if (stalls >= 3) {
      throw Error(ErrorCode::ToleranceUnreachable,
                  "refinement stalled at difference " + std::to_string(d) + " above tolerance " +
                      std::to_string(tol));
    }
    prev_diff = d;
    prev = std::move(cur);
  }
}

}  // namespace

OracleMatrix propagator(const DissipativeOdeProblem& problem, double t0, double t1, double tol) {
  check_request(t0, t1, tol);
  const Matrix id = Matrix::Identity(problem.dim(), problem.dim());
  auto r = refine(problem, t0, t1, id, false, tol);
  return {std::move(r.value), r.error, r.steps};
}

OracleVector duhamel_integral(const DissipativeOdeProblem& problem, int j, double h, double tol) {
  const double t0 = j * h;
  const double t1 = (j + 1) * h;
  check_request(t0, t1, tol);
  if (problem.homogeneous()) return {Vector::Zero(problem.dim()), 0.0, 0};
  auto r = refine(problem, t0, t1, Matrix::Zero(problem.dim(), 1), true, tol);
  return {r.value.col(0), r.error, r.steps};
}

OracleVector evolve(const DissipativeOdeProblem& problem, double t0, double t1, const Vector& u,
                    double tol) {
  check_request(t0, t1, tol);
  if (u.size() != problem.dim()) throw Error(ErrorCode::DimensionMismatch, "state length");
  Matrix y0 = u;
  auto r = refine(problem, t0, t1, y0, !problem.homogeneous(), tol);
  return {r.value.col(0), r.error, r.steps};
}

SolutionBundle exact_history(const DissipativeOdeProblem& problem, int M, double h, double tol) {
  if (M < 1) throw Error(ErrorCode::StepCountMismatch, "M must be at least 1");
  const double T = problem.horizon();
  if (std::abs(M * h - T) > 1e-12 * T) {
    throw Error(ErrorCode::StepCountMismatch, "M*h = " + std::to_string(M * h) +
                                                  " does not match T = " + std::to_string(T));
  }
  SolutionBundle out;
  out.h = h;
  out.M = M;
  out.Mp = 1;
  out.blocks.reserve(static_cast<std::size_t>(M) + 1);
  out.blocks.push_back(problem.u0());
  for (int k = 0; k < M; ++k) {
    const double t1 = (k + 1 == M) ? T : (k + 1) * h;
    out.blocks.push_back(evolve(problem, k * h, t1, out.blocks.back(), tol).value);
  }
  out.refresh_norms();
  return out;
}

double max_state_norm(const DissipativeOdeProblem& problem, int points, double tol) {
  if (points < 2) points = 2;
  const double T = problem.horizon();
  double best = problem.u0().norm();
  Vector u = problem.u0();
  double t = 0.0;
  for (int k = 1; k < points; ++k) {
    const double t1 = (k + 1 == points) ? T : T * k / (points - 1);
    u = evolve(problem, t, t1, u, tol).value;
    t = t1;
    best = std::max(best, u.norm());
  }
  return best;
}

double default_oracle_tol(double eps) {
  return std::max(kMinOracleTol, std::min(1e-10, eps / 100.0));
}

}  // namespace dissipode
