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
#include <vector>

#include "dissipode/block_system.hpp"
#include "dissipode/schemes.hpp"
#include "dissipode/solution.hpp"

namespace dissipode {

/// || h/||h|| - r/||r|| || over the first M + 1 blocks.
double state_error_history(const SolutionBundle& solution, const SolutionBundle& reference);

/// || u_M/||u_M|| - u(T)/||u(T)|| ||. For N == 1 the comparison is phase
/// free and the result is 0.
double state_error_final(const SolutionBundle& solution, const SolutionBundle& reference);

/// sum_{k >= M} ||u_k||^2 / sum_k ||u_k||^2.
double success_probability(const SolutionBundle& solution, int M, int Mp);

struct PaddingChoice {
  int Mp_rule = 1;
  double Mp_continuous = 0.0;
};

PaddingChoice optimal_padding(int M, double eta, double T);

/// f(x) = sqrt((M + x)/x) (M/(eta T) + x), minimized by Mp_continuous.
double padding_objective(int M, double x, double eta, double T);

struct ComplexityReport {
  Task task = Task::History;
  std::string scheme;
  double eps = 0.0;
  double h = 0.0;
  int M = 0;
  std::optional<int> K;
  int quad_nodes = 0;
  int Mp = 1;
  PaddingChoice padding;
  BlockExtremes extremes;
  double kappa_bound = 0.0;  // condition-number lemma, 2e M/(eta T) form
  double kappa_model = 0.0;  // unit-constant M/(eta T) form used for query counts
  bool hypothesis_on_probes = false;
  double eps_prime = 0.0;
  int q_scheme = 1;
  double queries_OA = 0.0;
  double queries_state_prep = 0.0;
  double aa_rounds = 1.0;
  double success_prob_lower = 1.0;
  double decay_ratio = 1.0;  // g = max_t ||u(t)|| / ||u(T)||
  double final_norm = 0.0;
  double max_norm = 0.0;
};

struct CostOptions {
  std::optional<int> Mp;  // final task: defaults to Mp_rule; history: 1
  double query_constant = 1.0;
  int growth_grid = 64;
  SelectOptions select;
};

/// (2 + max||L|| + max||R||)(M/(eta T) + Mp)(1 + max||L^-1||).
double kappa_model(const BlockExtremes& e, int M, int Mp, double eta, double T);

/// Block extremes of the scheme's system without storing it; padding rows
/// contribute identity blocks when Mp > 1.
BlockExtremes scheme_extremes(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                              int M, int Mp, double h);

/// Modeled query count for given ingredients:
///   ceil(c q kappa ln(1/eps')) * aa_rounds
/// with eps' and aa_rounds chosen per task.
struct QueryModelInput {
  Task task = Task::History;
  int M = 1;
  int Mp = 1;
  double eta = 1.0;
  double T = 1.0;
  double eps = 0.1;
  BlockExtremes extremes{1.0, 1.0, 1.0};
  int q_scheme = 1;
  double decay_ratio = 1.0;
  double query_constant = 1.0;
};
struct QueryModelOutput {
  double kappa = 0.0;
  double eps_prime = 0.0;
  double aa_rounds = 1.0;
  double queries_OA = 0.0;
  double queries_state_prep = 0.0;
};
QueryModelOutput model_queries(const QueryModelInput& in);

ComplexityReport cost_model(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                            Task task, double eps, const CostOptions& options = {});

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { T, Eps, Scheme, Mp };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepConfig {
  SweepAxis axis = SweepAxis::T;
  std::vector<std::string> values;  // numbers, or scheme names for the scheme axis
  SchemeKind scheme = SchemeKind::euler();
  Task task = Task::History;
  double eps = 0.1;
  std::optional<int> Mp;
  int jobs = 1;
  bool kappa_exact = true;
  bool check_hypothesis = true;
};

struct SweepRow {
  std::string axis;
  std::string value;
  std::string scheme;
  std::string task;
  double T = 0.0;
  double eps = 0.0;
  double h = 0.0;
  int M = 0;
  std::optional<int> K;
  int Mp = 0;
  std::optional<double> kappa_exact;
  double kappa_bound = 0.0;
  std::optional<bool> hypothesis;
  double state_error_history = 0.0;
  double state_error_final = 0.0;
  double success_probability = 0.0;
  double queries_OA = 0.0;
  std::string error;
};

/// One row per value, in input order; failures fill `error` instead of
/// aborting. Points run on `jobs` worker threads.
std::vector<SweepRow> sweep(const DissipativeOdeProblem& problem, const SweepConfig& config);

/// Fixed CSV header, shared by every sweep.
const std::string& sweep_csv_header();
/// RFC-4180 CSV with the fixed header; numbers printed with %.17g.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace dissipode
