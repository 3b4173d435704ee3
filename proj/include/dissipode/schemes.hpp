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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dissipode/ode_model.hpp"

namespace dissipode {

struct SchemeKind {
  enum class Variant { Euler, Trapezoidal, Dyson };

  Variant variant = Variant::Euler;
  int dyson_order = 1;  // K, Dyson only
  int quad_nodes = 16;  // q, Dyson only

  static SchemeKind euler() { return {Variant::Euler, 1, 16}; }
  static SchemeKind trapezoidal() { return {Variant::Trapezoidal, 1, 16}; }
  static SchemeKind dyson(int K, int q = 16);

  bool is_dyson() const noexcept { return variant == Variant::Dyson; }
  /// "euler", "trap" or "dyson".
  std::string name() const;
  /// Accepts the CLI spellings: euler, trap, trapezoidal, dyson.
  static SchemeKind parse(std::string_view name, int K = 1, int q = 16);
};

enum class Task { History, Final, HistoryHomogeneous };

std::string to_string(Task task);
/// history | final | history-homogeneous
Task parse_task(std::string_view name);

/// One step L u_{j+1} = R u_j + v.
struct StepOperators {
  Matrix L;
  Matrix R;
  Vector v;
  int j = 0;
  double h = 0.0;
};

/// Throws StepTooLarge (Dyson with h alpha_A > 1/2) or SingularL (trapezoid
/// with h alpha_A >= 2).
StepOperators step_operators(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                             int j, double h);

struct LocalErrors {
  double e_prop = 0.0;
  double e_inhom = 0.0;
};

/// Measured ||L^-1 R - U|| and ||L^-1 v - Duhamel|| for step j. When `target`
/// is given the oracle tolerance must be at most target / 100.
LocalErrors local_errors(const DissipativeOdeProblem& problem, const SchemeKind& scheme, int j,
                         double h, double oracle_tol,
                         std::optional<double> target = std::nullopt);
LocalErrors local_errors(const DissipativeOdeProblem& problem, const StepOperators& ops,
                         double oracle_tol, std::optional<double> target = std::nullopt);

struct ToleranceBudget {
  double tol_propagator = 0.0;  // epsilon_1
  double tol_inhom = 0.0;       // epsilon_2; +inf when unused
  Task task = Task::History;
};

/// Right-hand sides of the step conditions of the history, final and
/// homogeneous-history theorems. max||A|| and max||b|| are taken as alpha_A
/// and alpha_b. For Task::Final, `final_norm` is a lower bound on ||u(T)||;
/// when absent the reference oracle supplies one.
ToleranceBudget tolerance_budget(const DissipativeOdeProblem& problem, double eps, double h,
                                 Task task, std::optional<double> final_norm = std::nullopt);

/// The half-e-folding cap 0.5 eta h exp(-eta h) that both the budget and the
/// condition-number hypothesis share.
double contraction_threshold(double eta, double h);

struct SelectOptions {
  int probe_steps = 16;
  int max_order = 40;
  int max_quad_nodes = 1 << 16;
  int max_iterations = 60;
  std::optional<double> final_norm;
};

struct StepSelection {
  double h = 0.0;
  int M = 0;
  std::optional<int> K;
  SchemeKind scheme;  // with the chosen K and q for Dyson
  ToleranceBudget budget;
  double worst_e_prop = 0.0;
  double worst_e_inhom = 0.0;
};

/// Probe step indices: every step when M <= probe_steps, otherwise
/// probe_steps evenly spaced indices including 0 and M - 1.
std::vector<int> probe_indices(int M, int probe_steps);

/// Smallest K with (alpha_A h)^{K+1}/(K+1)! <= eps1 and, for inhomogeneous
/// problems, alpha_b h (alpha_A h)^K/(K+1)! <= eps2.
int dyson_order_for(double alpha_A, double alpha_b, double h, const ToleranceBudget& budget,
                    bool homogeneous, int max_order = 40);

StepSelection select_step(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                          double eps, Task task, const SelectOptions& options = {});

}  // namespace dissipode
