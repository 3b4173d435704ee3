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

#include "dissipode/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dissipode/error.hpp"
#include "dissipode/reference_oracle.hpp"

namespace dissipode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Iterated time-ordered integrals on q midpoint nodes of [jh, (j+1)h].
//   F_0 = I,  F_k(t) = int_{jh}^t A(s) F_{k-1}(s) ds
//   G_1(t) = int_{jh}^t b(s) ds,  G_k(t) = int_{jh}^t A(s) G_{k-1}(s) ds
// Each cumulative integral is a composite rectangle sum over the nodes below
// t plus half of the cell containing t. R = sum_k F_k(end), v = sum_k G_k(end).
void dyson_sums(const DissipativeOdeProblem& problem, int K, int q, int j, double h, Matrix& R,
                Vector& v) {
  const Eigen::Index n = problem.dim();
  const double t0 = j * h;
  const double w = h / q;
  std::vector<Matrix> a(static_cast<std::size_t>(q));
  std::vector<Vector> b;
  for (int i = 0; i < q; ++i) a[i] = problem.A(t0 + (i + 0.5) * w);
  const bool source = !problem.homogeneous();
  if (source) {
    b.resize(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) b[i] = problem.b(t0 + (i + 0.5) * w);
  }

  R = Matrix::Identity(n, n);
  v = Vector::Zero(n);
  std::vector<Matrix> f(static_cast<std::size_t>(q), Matrix::Identity(n, n));
  std::vector<Matrix> g;  // G_{k-1} at the nodes, as N x 1 matrices
  if (source) {
    g.resize(static_cast<std::size_t>(q));
    Matrix acc = Matrix::Zero(n, 1);
    for (int i = 0; i < q; ++i) {
      g[i] = acc + 0.5 * w * b[i];
      acc += w * b[i];
    }
    v += acc.col(0);  // G_1(end)
  }
  for (int k = 1; k <= K; ++k) {
    Matrix acc = Matrix::Zero(n, n);
    std::vector<Matrix> next(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
      const Matrix term = a[i] * f[i];
      next[i] = acc + 0.5 * w * term;
      acc += w * term;
    }
    R += acc;
    f = std::move(next);
    if (source && k + 1 <= K) {
      Matrix gacc = Matrix::Zero(n, 1);
      std::vector<Matrix> gnext(static_cast<std::size_t>(q));
      for (int i = 0; i < q; ++i) {
        const Matrix term = a[i] * g[i];
        gnext[i] = gacc + 0.5 * w * term;
        gacc += w * term;
      }
      v += gacc.col(0);  // G_{k+1}(end)
      g = std::move(gnext);
    }
  }
}

double lgamma_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

SchemeKind SchemeKind::dyson(int K, int q) {
  if (K < 1) throw Error(ErrorCode::InvalidProblem, "Dyson order K must be at least 1");
  if (q < 2) throw Error(ErrorCode::InvalidProblem, "Dyson quadrature needs q >= 2");
  return {Variant::Dyson, K, q};
}

std::string SchemeKind::name() const {
  switch (variant) {
    case Variant::Euler: return "euler";
    case Variant::Trapezoidal: return "trap";
    case Variant::Dyson: return "dyson";
  }
  return "unknown";
}

SchemeKind SchemeKind::parse(std::string_view name, int K, int q) {
  if (name == "euler") return euler();
  if (name == "trap" || name == "trapezoidal") return trapezoidal();
  if (name == "dyson") return dyson(K, q);
  throw Error(ErrorCode::ParseError, "unknown scheme '" + std::string(name) + "'");
}

std::string to_string(Task task) {
  switch (task) {
    case Task::History: return "history";
    case Task::Final: return "final";
    case Task::HistoryHomogeneous: return "history-homogeneous";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  if (name == "history") return Task::History;
  if (name == "final") return Task::Final;
  if (name == "history-homogeneous" || name == "homogeneous") return Task::HistoryHomogeneous;
  throw Error(ErrorCode::ParseError, "unknown task '" + std::string(name) + "'");
}

StepOperators step_operators(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                             int j, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::StepTooLarge, "step size must be positive");
  if (j < 0) throw Error(ErrorCode::IndexOutOfRange, "step index must be nonnegative");
  const Eigen::Index n = problem.dim();
  const Matrix id = Matrix::Identity(n, n);
  const double t0 = j * h;
  const double t1 = (j + 1) * h;
  StepOperators ops;
  ops.j = j;
  ops.h = h;
  switch (scheme.variant) {
    case SchemeKind::Variant::Euler:
      ops.L = id;
      ops.R = id + h * problem.A(t0);
      ops.v = h * problem.b(t0);
      break;
    case SchemeKind::Variant::Trapezoidal: {
      if (h * problem.alpha_A() >= 2.0) {
        throw Error(ErrorCode::SingularL, "trapezoid needs h*alpha_A < 2, got " +
                                              std::to_string(h * problem.alpha_A()));
      }
      ops.L = id - 0.5 * h * problem.A(t1);
      ops.R = id + 0.5 * h * problem.A(t0);
      ops.v = 0.5 * h * (problem.b(t0) + problem.b(t1));
      if (min_singular_value(ops.L) <= 1e-12) {
        throw Error(ErrorCode::SingularL, "trapezoid L block is numerically singular");
      }
      break;
    }
    case SchemeKind::Variant::Dyson:
      if (h * problem.alpha_A() > 0.5 + 1e-12) {
        throw Error(ErrorCode::StepTooLarge, "Dyson needs h*alpha_A <= 1/2, got " +
                                                 std::to_string(h * problem.alpha_A()));
      }
      ops.L = id;
      dyson_sums(problem, scheme.dyson_order, scheme.quad_nodes, j, h, ops.R, ops.v);
      break;
  }
  return ops;
}

LocalErrors local_errors(const DissipativeOdeProblem& problem, const StepOperators& ops,
                         double oracle_tol, std::optional<double> target) {
  if (target && oracle_tol > *target / 100.0) {
    throw Error(ErrorCode::OracleToleranceTooCoarse,
                "oracle tolerance " + std::to_string(oracle_tol) + " exceeds target/100 = " +
                    std::to_string(*target / 100.0));
  }
  const double t0 = ops.j * ops.h;
  const double t1 = (ops.j + 1) * ops.h;
  LocalErrors out;
  const Matrix u = propagator(problem, t0, t1, oracle_tol).value;
  out.e_prop = spectral_norm(solve_block(ops.L, ops.R) - u);
  if (!problem.homogeneous()) {
    const Vector d = duhamel_integral(problem, ops.j, ops.h, oracle_tol).value;
    out.e_inhom = (solve_block(ops.L, ops.v) - d).norm();
  }
  return out;
}

LocalErrors local_errors(const DissipativeOdeProblem& problem, const SchemeKind& scheme, int j,
                         double h, double oracle_tol, std::optional<double> target) {
  if (target && oracle_tol > *target / 100.0) {
    throw Error(ErrorCode::OracleToleranceTooCoarse,
                "oracle tolerance " + std::to_string(oracle_tol) + " exceeds target/100 = " +
                    std::to_string(*target / 100.0));
  }
  return local_errors(problem, step_operators(problem, scheme, j, h), oracle_tol);
}

double contraction_threshold(double eta, double h) {
  return 0.5 * eta * h * std::exp(-eta * h);
}

ToleranceBudget tolerance_budget(const DissipativeOdeProblem& problem, double eps, double h,
                                 Task task, std::optional<double> final_norm) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::InvalidEps, "eps must lie in (0, 1), got " + std::to_string(eps));
  }
  const double eta = problem.eta();
  if (eta * h > 1.0 + 1e-12) {
    throw Error(ErrorCode::StepConditionViolated,
                "eta*h = " + std::to_string(eta * h) + " exceeds 1");
  }
  const double T = problem.horizon();
  const double aA = problem.alpha_A();
  const double ab = problem.alpha_b();
  const double u0 = problem.u0().norm();
  const double cap = contraction_threshold(eta, h);
  const double sqrt2 = std::numbers::sqrt2;
  ToleranceBudget out;
  out.task = task;
  switch (task) {
    case Task::History: {
      const double mixed = std::sqrt(aA + ab / u0);
      const double growth = std::sqrt(1.0 + T * ab * ab / (eta * u0 * u0));
      out.tol_propagator =
          std::min(cap, std::pow(eta, 1.5) * h * eps / (144.0 * sqrt2 * growth * mixed));
      out.tol_inhom = u0 * eta * h * eps / (72.0 * sqrt2 * std::sqrt(T) * mixed);
      break;
    }
    case Task::Final: {
      double un = 0.0;
      if (final_norm) {
        un = *final_norm;
      } else {
        const auto r = evolve(problem, 0.0, T, problem.u0(), default_oracle_tol(eps));
        un = std::max(0.0, r.value.norm() - r.error_estimate);
      }
      out.tol_propagator = std::min(cap, un / (u0 + ab / eta) * eta * h * eps / 128.0);
      out.tol_inhom = un * eta * h * eps / 32.0;
      break;
    }
    case Task::HistoryHomogeneous:
      if (!problem.homogeneous()) {
        throw Error(ErrorCode::InvalidProblem, "homogeneous history task needs b == 0");
      }
      out.tol_propagator = std::min(cap, std::pow(eta, 1.5) * h * eps / (32.0 * std::sqrt(aA)));
      out.tol_inhom = kInf;
      break;
  }
  return out;
}

std::vector<int> probe_indices(int M, int probe_steps) {
  std::vector<int> out;
  if (M <= probe_steps || probe_steps < 2) {
    for (int j = 0; j < M; ++j) out.push_back(j);
    return out;
  }
  for (int i = 0; i < probe_steps; ++i) {
    const int j = static_cast<int>(std::llround(static_cast<double>(i) * (M - 1) / (probe_steps - 1)));
    if (out.empty() || out.back() != j) out.push_back(j);
  }
  return out;
}

int dyson_order_for(double alpha_A, double alpha_b, double h, const ToleranceBudget& budget,
                    bool homogeneous, int max_order) {
  const double x = alpha_A * h;
  for (int K = 1; K <= max_order; ++K) {
    const double prop = std::exp((K + 1) * std::log(x) - lgamma_factorial(K + 1));
    bool ok = prop <= budget.tol_propagator;
    if (ok && !homogeneous) {
      const double inhom = alpha_b * h * std::exp(K * std::log(x) - lgamma_factorial(K + 1));
      ok = inhom <= budget.tol_inhom;
    }
    if (ok) return K;
  }
  throw Error(ErrorCode::NoFeasibleStep,
              "no Dyson order K <= " + std::to_string(max_order) + " meets the budget");
}

namespace {

struct Probe {
  double ratio = 0.0;  // max(e_prop / eps1, e_inhom / eps2)
  double e_prop = 0.0;
  double e_inhom = 0.0;
};

Probe measure(const DissipativeOdeProblem& problem, const SchemeKind& scheme, int M, double h,
              const ToleranceBudget& budget, int probe_steps) {
  double tol = std::min(1e-10, budget.tol_propagator / 100.0);
  if (!problem.homogeneous()) tol = std::min(tol, budget.tol_inhom / 100.0);
  tol = std::max(tol, kMinOracleTol);
  Probe p;
  for (int j : probe_indices(M, probe_steps)) {
    const auto e = local_errors(problem, scheme, j, h, tol);
    p.e_prop = std::max(p.e_prop, e.e_prop);
    p.e_inhom = std::max(p.e_inhom, e.e_inhom);
  }
  p.ratio = p.e_prop / budget.tol_propagator;
  if (!problem.homogeneous() && std::isfinite(budget.tol_inhom)) {
    p.ratio = std::max(p.ratio, p.e_inhom / budget.tol_inhom);
  }
  return p;
}

StepSelection select_dyson(const DissipativeOdeProblem& problem, SchemeKind scheme, double eps,
                           Task task, const SelectOptions& opt) {
  const double T = problem.horizon();
  const int M = std::max(1, static_cast<int>(std::ceil(2.0 * problem.alpha_A() * T - 1e-9)));
  const double h = T / M;
  const auto budget = tolerance_budget(problem, eps, h, task, opt.final_norm);
  int K = dyson_order_for(problem.alpha_A(), problem.alpha_b(), h, budget, problem.homogeneous(),
                          opt.max_order);
  int q = scheme.quad_nodes;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    const auto cur = measure(problem, SchemeKind::dyson(K, q), M, h, budget, opt.probe_steps);
    if (cur.ratio <= 1.0) {
      StepSelection s;
      s.h = h;
      s.M = M;
      s.K = K;
      s.scheme = SchemeKind::dyson(K, q);
      s.budget = budget;
      s.worst_e_prop = cur.e_prop;
      s.worst_e_inhom = cur.e_inhom;
      return s;
    }
    // Decide whether quadrature or truncation dominates the measured error.
    bool refine_q = false;
    if (2 * q <= opt.max_quad_nodes) {
      const auto finer = measure(problem, SchemeKind::dyson(K, 2 * q), M, h, budget, opt.probe_steps);
      refine_q = finer.ratio < 0.5 * cur.ratio;
    }
    if (refine_q) {
      q *= 2;
    } else if (K < opt.max_order) {
      ++K;
    } else {
      break;
    }
  }
  throw Error(ErrorCode::NoFeasibleStep, "Dyson order/quadrature search did not meet the budget");
}

StepSelection select_low_order(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                               double eps, Task task, const SelectOptions& opt) {
  const double T = problem.horizon();
  const double eta = problem.eta();
  const double aA = problem.alpha_A();
  int m_min = std::max(1, static_cast<int>(std::ceil(eta * T - 1e-12)));
  if (scheme.variant == SchemeKind::Variant::Trapezoidal) {
    m_min = std::max(m_min, static_cast<int>(std::floor(aA * T / 2.0)) + 1);
  }
  std::optional<double> final_norm = opt.final_norm;
  if (task == Task::Final && !final_norm) {
    const auto r = evolve(problem, 0.0, T, problem.u0(), default_oracle_tol(eps));
    final_norm = std::max(0.0, r.value.norm() - r.error_estimate);
  }

  struct Eval {
    bool ok = false;
    Probe probe;
    ToleranceBudget budget;
  };
  auto feasible = [&](long m) {
    Eval e;
    const double h = T / static_cast<double>(m);
    if (eta * h > 1.0) return e;
    e.budget = tolerance_budget(problem, eps, h, task, final_norm);
    e.probe = measure(problem, scheme, static_cast<int>(m), h, e.budget, opt.probe_steps);
    e.ok = e.probe.ratio <= 1.0;
    return e;
  };

  long lo = 0;  // largest known infeasible M (0 = none)
  long hi = m_min;
  Eval best = feasible(hi);
  int iterations = 0;
  while (!best.ok) {
    if (++iterations > opt.max_iterations || hi > (1L << 30)) {
      throw Error(ErrorCode::NoFeasibleStep, "no feasible step size found by bisection");
    }
    lo = hi;
    hi *= 2;
    best = feasible(hi);
  }
  if (lo == 0) lo = m_min - 1;
  while (hi - lo > 1) {
    if (++iterations > opt.max_iterations) {
      throw Error(ErrorCode::NoFeasibleStep, "bisection exhausted its iteration budget");
    }
    const long mid = lo + (hi - lo) / 2;
    auto e = feasible(mid);
    if (e.ok) {
      hi = mid;
      best = e;
    } else {
      lo = mid;
    }
  }
  StepSelection s;
  s.M = static_cast<int>(hi);
  s.h = T / static_cast<double>(hi);
  s.scheme = scheme;
  s.budget = best.budget;
  s.worst_e_prop = best.probe.e_prop;
  s.worst_e_inhom = best.probe.e_inhom;
  return s;
}

}  // namespace

StepSelection select_step(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                          double eps, Task task, const SelectOptions& options) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::InvalidEps, "eps must lie in (0, 1), got " + std::to_string(eps));
  }
  if (scheme.is_dyson()) return select_dyson(problem, scheme, eps, task, options);
  return select_low_order(problem, scheme, eps, task, options);
}

}  // namespace dissipode
