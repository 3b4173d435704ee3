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

#include "dissipode/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "dissipode/error.hpp"
#include "dissipode/reference_oracle.hpp"

namespace dissipode {

namespace {

Vector normalized(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) return v;
  return v / n;
}

}  // namespace

double state_error_history(const SolutionBundle& solution, const SolutionBundle& reference) {
  if (solution.M != reference.M || solution.blocks.empty() || reference.blocks.empty() ||
      solution.blocks.front().size() != reference.blocks.front().size() ||
      std::abs(solution.h - reference.h) > 1e-12 * std::max(1.0, std::abs(reference.h))) {
    throw Error(ErrorCode::ShapeMismatch, "history comparison needs equal M, h and block size");
  }
  return (normalized(solution.history_vector()) - normalized(reference.history_vector())).norm();
}

double state_error_final(const SolutionBundle& solution, const SolutionBundle& reference) {
  if (solution.blocks.size() <= static_cast<std::size_t>(solution.M) ||
      reference.blocks.size() <= static_cast<std::size_t>(reference.M) ||
      solution.final_state().size() != reference.final_state().size()) {
    throw Error(ErrorCode::ShapeMismatch, "final-state comparison needs matching blocks");
  }
  const Vector& a = solution.final_state();
  const Vector& b = reference.final_state();
  if (a.norm() < 1e-300 || b.norm() < 1e-300) {
    throw Error(ErrorCode::ZeroFinalState, "final state has zero norm");
  }
  if (a.size() == 1) return 0.0;
  return (a / a.norm() - b / b.norm()).norm();
}

double success_probability(const SolutionBundle& solution, int M, int Mp) {
  if (solution.blocks.size() != static_cast<std::size_t>(M + Mp)) {
    throw Error(ErrorCode::ShapeMismatch, "solution does not have M + Mp blocks");
  }
  double top = 0.0;
  double all = 0.0;
  for (std::size_t k = 0; k < solution.blocks.size(); ++k) {
    const double s = solution.blocks[k].squaredNorm();
    all += s;
    if (k >= static_cast<std::size_t>(M)) top += s;
  }
  return all > 0.0 ? top / all : 0.0;
}

PaddingChoice optimal_padding(int M, double eta, double T) {
  if (!(eta * T > 0.0)) throw Error(ErrorCode::InvalidProblem, "optimal padding needs eta*T > 0");
  const double x = eta * T;
  PaddingChoice p;
  p.Mp_rule = std::max(1, static_cast<int>(std::ceil(M / x - 1e-12)));
  p.Mp_continuous = 2.0 * M / (x * (1.0 + std::sqrt(1.0 + 8.0 / x)));
  return p;
}

double padding_objective(int M, double x, double eta, double T) {
  return std::sqrt((M + x) / x) * (M / (eta * T) + x);
}

double kappa_model(const BlockExtremes& e, int M, int Mp, double eta, double T) {
  return (2.0 + e.max_L + e.max_R) * (M / (eta * T) + Mp) * (1.0 + e.max_L_inv);
}

BlockExtremes scheme_extremes(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                              int M, int Mp, double h) {
  BlockExtremes e;
  e.max_L = 1.0;  // first row
  e.max_L_inv = 1.0;
  for (int j = 0; j < M; ++j) {
    const auto ops = step_operators(problem, scheme, j, h);
    e.max_L = std::max(e.max_L, spectral_norm(ops.L));
    e.max_R = std::max(e.max_R, spectral_norm(ops.R));
    const double smin = min_singular_value(ops.L);
    if (!(smin > 0.0)) throw Error(ErrorCode::SingularBlock, "L block is singular");
    e.max_L_inv = std::max(e.max_L_inv, 1.0 / smin);
  }
  if (Mp > 1) e.max_R = std::max(e.max_R, 1.0);
  return e;
}

QueryModelOutput model_queries(const QueryModelInput& in) {
  QueryModelOutput out;
  out.kappa = kappa_model(in.extremes, in.M, in.Mp, in.eta, in.T);
  if (in.task == Task::Final) {
    out.eps_prime = in.eps / (8.0 * std::sqrt(static_cast<double>(in.M + in.Mp)) * in.decay_ratio);
    out.aa_rounds = std::ceil(4.0 * in.decay_ratio *
                              std::sqrt(static_cast<double>(in.M + in.Mp) / in.Mp) - 1e-12);
  } else {
    out.eps_prime = in.eps;
    out.aa_rounds = 1.0;
  }
  const double solves = in.query_constant * out.kappa * std::log(1.0 / out.eps_prime);
  out.queries_OA = std::max(1.0, std::ceil(in.q_scheme * solves)) * out.aa_rounds;
  out.queries_state_prep = std::max(1.0, std::ceil(solves)) * out.aa_rounds;
  return out;
}

ComplexityReport cost_model(const DissipativeOdeProblem& problem, const SchemeKind& scheme,
                            Task task, double eps, const CostOptions& options) {
  const double T = problem.horizon();
  const double eta = problem.eta();
  const double tol = default_oracle_tol(eps);
  ComplexityReport r;
  r.task = task;
  r.eps = eps;

  const auto fin = evolve(problem, 0.0, T, problem.u0(), tol);
  r.final_norm = fin.value.norm();
  r.max_norm = std::max(max_state_norm(problem, options.growth_grid, tol), r.final_norm);
  if (task == Task::Final && r.final_norm < 1e-300) {
    throw Error(ErrorCode::ZeroFinalState, "exact final state has zero norm");
  }
  r.decay_ratio = r.final_norm > 0.0 ? r.max_norm / r.final_norm : 1.0;

  SelectOptions sel_opt = options.select;
  if (task == Task::Final && !sel_opt.final_norm) {
    sel_opt.final_norm = std::max(0.0, r.final_norm - fin.error_estimate);
  }
  const auto sel = select_step(problem, scheme, eps, task, sel_opt);
  r.scheme = sel.scheme.name();
  r.h = sel.h;
  r.M = sel.M;
  r.K = sel.K;
  r.quad_nodes = sel.scheme.is_dyson() ? sel.scheme.quad_nodes : 0;
  r.padding = optimal_padding(sel.M, eta, T);
  r.Mp = options.Mp.value_or(task == Task::Final ? r.padding.Mp_rule : 1);
  if (r.Mp < 1) throw Error(ErrorCode::StepCountMismatch, "Mp must be at least 1");
  r.extremes = scheme_extremes(problem, sel.scheme, r.M, r.Mp, r.h);
  r.kappa_bound = (2.0 + r.extremes.max_L + r.extremes.max_R) *
                  (2.0 * std::numbers::e * r.M / (eta * T) + r.Mp) * (1.0 + r.extremes.max_L_inv);
  r.hypothesis_on_probes = sel.worst_e_prop <= contraction_threshold(eta, r.h);
  switch (sel.scheme.variant) {
    case SchemeKind::Variant::Euler: r.q_scheme = 1; break;
    case SchemeKind::Variant::Trapezoidal: r.q_scheme = 2; break;
    case SchemeKind::Variant::Dyson: r.q_scheme = sel.scheme.dyson_order; break;
  }

  QueryModelInput in;
  in.task = task;
  in.M = r.M;
  in.Mp = r.Mp;
  in.eta = eta;
  in.T = T;
  in.eps = eps;
  in.extremes = r.extremes;
  in.q_scheme = r.q_scheme;
  in.decay_ratio = r.decay_ratio;
  in.query_constant = options.query_constant;
  const auto q = model_queries(in);
  r.kappa_model = q.kappa;
  r.eps_prime = q.eps_prime;
  r.aa_rounds = q.aa_rounds;
  r.queries_OA = q.queries_OA;
  r.queries_state_prep = q.queries_state_prep;
  if (task == Task::Final) {
    r.success_prob_lower = r.Mp / (16.0 * (r.M + r.Mp) * r.decay_ratio * r.decay_ratio);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::T: return "T";
    case SweepAxis::Eps: return "eps";
    case SweepAxis::Scheme: return "scheme";
    case SweepAxis::Mp: return "Mp";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "T") return SweepAxis::T;
  if (name == "eps") return SweepAxis::Eps;
  if (name == "scheme") return SweepAxis::Scheme;
  if (name == "Mp" || name == "mp") return SweepAxis::Mp;
  throw Error(ErrorCode::ParseError, "unknown sweep axis '" + name + "'");
}

namespace {

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  return v;
}

SweepRow run_point(const DissipativeOdeProblem& base, const SweepConfig& cfg,
                   const std::string& value) {
  SweepRow row;
  row.axis = to_string(cfg.axis);
  row.value = value;
  row.task = to_string(cfg.task);
  row.scheme = cfg.scheme.name();
  row.eps = cfg.eps;
  row.T = base.horizon();
  try {
    SchemeKind scheme = cfg.scheme;
    std::optional<int> mp = cfg.Mp;
    std::optional<DissipativeOdeProblem> owned;
    const DissipativeOdeProblem* problem = &base;
    switch (cfg.axis) {
      case SweepAxis::T:
        owned.emplace(base.with_horizon(parse_number(value)));
        problem = &*owned;
        row.T = problem->horizon();
        break;
      case SweepAxis::Eps:
        row.eps = parse_number(value);
        break;
      case SweepAxis::Scheme:
        scheme = SchemeKind::parse(value, cfg.scheme.dyson_order, cfg.scheme.quad_nodes);
        row.scheme = scheme.name();
        break;
      case SweepAxis::Mp: {
        const double v = parse_number(value);
        if (v < 1.0 || v != std::floor(v)) throw Error(ErrorCode::ParseError, "Mp must be an integer >= 1");
        mp = static_cast<int>(v);
        break;
      }
    }
    CostOptions copt;
    copt.Mp = mp;
    const auto rep = cost_model(*problem, scheme, cfg.task, row.eps, copt);
    row.scheme = rep.scheme;
    row.h = rep.h;
    row.M = rep.M;
    row.K = rep.K;
    row.Mp = rep.Mp;
    row.kappa_bound = rep.kappa_bound;
    row.queries_OA = rep.queries_OA;

    const auto sel_scheme = rep.K ? SchemeKind::dyson(*rep.K, rep.quad_nodes) : scheme;
    const auto system = assemble(*problem, sel_scheme, rep.M, rep.Mp, rep.h);
    const auto sol = forward_solve(system);
    const auto ref = exact_history(*problem, rep.M, rep.h, default_oracle_tol(row.eps));
    row.state_error_history = state_error_history(sol, ref);
    row.state_error_final = state_error_final(sol, ref);
    row.success_probability = success_probability(sol, rep.M, rep.Mp);
    if (cfg.kappa_exact && system.dimension() <= kDenseGuard) row.kappa_exact = kappa_exact(system);
    if (cfg.check_hypothesis) row.hypothesis = check_lemma_hypothesis(*problem, system).pass;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<SweepRow> sweep(const DissipativeOdeProblem& problem, const SweepConfig& config) {
  std::vector<SweepRow> rows(config.values.size());
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(rows.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i] = run_point(problem, config, config.values[i]);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

const std::string& sweep_csv_header() {
  static const std::string header =
      "axis,value,scheme,task,T,eps,h,M,K,Mp,kappa_exact,kappa_bound,hypothesis,"
      "state_error_history,state_error_final,success_probability,queries_OA,error";
  return header;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\r\n";
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    std::vector<std::string> f{
        csv_field(r.axis),
        csv_field(r.value),
        csv_field(r.scheme),
        csv_field(r.task),
        fmt(r.T),
        fmt(r.eps),
        ok ? fmt(r.h) : "",
        ok ? std::to_string(r.M) : "",
        r.K ? std::to_string(*r.K) : "",
        ok ? std::to_string(r.Mp) : "",
        r.kappa_exact ? fmt(*r.kappa_exact) : "",
        ok ? fmt(r.kappa_bound) : "",
        r.hypothesis ? (*r.hypothesis ? "true" : "false") : "",
        ok ? fmt(r.state_error_history) : "",
        ok ? fmt(r.state_error_final) : "",
        ok ? fmt(r.success_probability) : "",
        ok ? fmt(r.queries_OA) : "",
        csv_field(r.error),
    };
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += f[i];
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace dissipode
