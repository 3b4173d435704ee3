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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dissipode/analysis.hpp"
#include "dissipode/block_system.hpp"
#include "dissipode/error.hpp"
#include "dissipode/matrix_market.hpp"
#include "dissipode/problem_io.hpp"
#include "dissipode/reference_oracle.hpp"
#include "dissipode/verification.hpp"

namespace dissipode::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string problem;
  std::string scheme = "euler";
  int dyson_order = 1;
  int quad_nodes = 16;
  std::string task = "history";
  double eps = 0.1;
  std::optional<int> M;
  std::string mp = "auto";
  std::string format;  // empty: the subcommand default
  std::string output;
  std::string export_mtx;
  std::uint64_t seed = VerifyOptions{}.seed;
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json scheme_json(const SchemeKind& s) {
  json j{{"name", s.name()}};
  if (s.is_dyson()) {
    j["K"] = s.dyson_order;
    j["quad_nodes"] = s.quad_nodes;
  }
  return j;
}

json report_json(const ComplexityReport& r) {
  return json{{"task", to_string(r.task)},
              {"scheme", r.scheme},
              {"eps", r.eps},
              {"h", r.h},
              {"M", r.M},
              {"K", optional_int(r.K)},
              {"quad_nodes", r.quad_nodes},
              {"Mp", r.Mp},
              {"Mp_rule", r.padding.Mp_rule},
              {"Mp_continuous", r.padding.Mp_continuous},
              {"max_norm_L", r.extremes.max_L},
              {"max_norm_R", r.extremes.max_R},
              {"max_norm_L_inv", r.extremes.max_L_inv},
              {"kappa_bound", r.kappa_bound},
              {"kappa_model", r.kappa_model},
              {"hypothesis_on_probes", r.hypothesis_on_probes},
              {"eps_prime", r.eps_prime},
              {"q_scheme", r.q_scheme},
              {"queries_OA", r.queries_OA},
              {"queries_state_prep", r.queries_state_prep},
              {"aa_rounds", r.aa_rounds},
              {"success_prob_lower", r.success_prob_lower},
              {"decay_ratio", r.decay_ratio},
              {"final_norm", r.final_norm},
              {"max_norm", r.max_norm}};
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + cfg.output + "'");
  f << text;
}

void emit_json(const RunConfig& cfg, json doc, std::ostream& out) {
  json wrapped{{"schema", kSchema}};
  wrapped.update(doc);
  emit(cfg, wrapped.dump(2) + "\n", out);
}

SchemeKind scheme_of(const RunConfig& cfg) {
  return SchemeKind::parse(cfg.scheme, cfg.dyson_order, cfg.quad_nodes);
}

std::optional<int> mp_of(const RunConfig& cfg) {
  if (cfg.mp == "auto" || cfg.mp.empty()) return std::nullopt;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(cfg.mp, &pos);
    if (pos != cfg.mp.size() || v < 1) throw std::invalid_argument("mp");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "--mp must be 'auto' or a positive integer");
  }
}

std::vector<std::string> split_values(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const auto problem = load_problem_file(cfg.problem);
  const Task task = parse_task(cfg.task);
  SchemeKind scheme = scheme_of(cfg);
  const double T = problem.horizon();
  const double tol = default_oracle_tol(cfg.eps);

  json selection;
  int M = 0;
  double h = 0.0;
  if (cfg.M) {
    M = *cfg.M;
    if (M < 1) throw Error(ErrorCode::StepCountMismatch, "--M must be positive");
    h = T / M;
    selection = {{"source", "override"}};
  } else {
    SelectOptions sopt;
    if (task == Task::Final) {
      const auto fin = evolve(problem, 0.0, T, problem.u0(), tol);
      sopt.final_norm = std::max(0.0, fin.value.norm() - fin.error_estimate);
    }
    const auto sel = select_step(problem, scheme, cfg.eps, task, sopt);
    M = sel.M;
    h = sel.h;
    scheme = sel.scheme;
    selection = {{"source", "select_step"},
                 {"tol_propagator", sel.budget.tol_propagator},
                 {"tol_inhom", number_or_null(sel.budget.tol_inhom)},
                 {"worst_e_prop", sel.worst_e_prop},
                 {"worst_e_inhom", sel.worst_e_inhom}};
  }
  const auto padding = optimal_padding(M, problem.eta() > 0 ? problem.eta() : 1.0, T);
  const int Mp = mp_of(cfg).value_or(task == Task::Final ? padding.Mp_rule : 1);

  const auto system = assemble(problem, scheme, M, Mp, h);
  if (!cfg.export_mtx.empty()) export_system(system, cfg.export_mtx);
  const auto sol = forward_solve(system);
  const auto ref = exact_history(problem, M, h, tol);
  const double err_hist = state_error_history(sol, ref);
  const double err_final = state_error_final(sol, ref);

  json doc{{"command", "solve"},
           {"problem", problem_summary(problem)},
           {"scheme", scheme_json(scheme)},
           {"task", to_string(task)},
           {"eps", cfg.eps},
           {"h", h},
           {"M", M},
           {"Mp", Mp},
           {"Mp_rule", padding.Mp_rule},
           {"selection", selection},
           {"residual", sol.residual},
           {"state_error_history", err_hist},
           {"state_error_final", err_final},
           {"state_error", task == Task::Final ? err_final : err_hist},
           {"success_probability", success_probability(sol, M, Mp)},
           {"final_state", vector_to_json(sol.final_state())},
           {"reference_final_state", vector_to_json(ref.final_state())}};
  emit_json(cfg, doc, out);
  return kExitOk;
}

int cmd_kappa(const RunConfig& cfg, std::ostream& out) {
  const auto problem = load_problem_file(cfg.problem);
  if (!cfg.M) throw Error(ErrorCode::ParseError, "kappa needs --M");
  const int M = *cfg.M;
  const int Mp = mp_of(cfg).value_or(1);
  const double h = problem.horizon() / M;
  const auto system = assemble(problem, scheme_of(cfg), M, Mp, h);
  json bound = nullptr;
  json hypothesis;
  if (problem.eta() > 0.0) {
    const auto hyp = check_lemma_hypothesis(problem, system);
    if (hyp.pass) {
      const auto k = kappa_bound_formula(system, problem.eta(), problem.horizon());
      bound = {{"norm_bound", k.norm_bound}, {"inv_bound", k.inv_bound}, {"kappa", k.kappa}};
    }
    hypothesis = {{"pass", hyp.pass},
                  {"worst_step", hyp.worst_step},
                  {"worst_error", hyp.worst_error},
                  {"threshold", hyp.threshold},
                  {"first_violation", hyp.first_violation}};
  } else {
    // Diagnostic runs with eta = 0: the bound is undefined, only the exact value is reported.
    hypothesis = {{"pass", false}, {"reason", "eta is zero"}};
  }
  json exact = nullptr;
  if (system.dimension() <= kDenseGuard) exact = kappa_exact(system);
  json doc{{"command", "kappa"},
           {"problem", problem_summary(problem)},
           {"scheme", scheme_json(system.scheme)},
           {"h", h},
           {"M", M},
           {"Mp", Mp},
           {"kappa_exact", exact},
           {"kappa_bound", bound},
           {"hypothesis", hypothesis}};
  emit_json(cfg, doc, out);
  return kExitOk;
}

int cmd_cost(const RunConfig& cfg, std::ostream& out) {
  const auto problem = load_problem_file(cfg.problem);
  CostOptions opt;
  opt.Mp = mp_of(cfg);
  const auto rep = cost_model(problem, scheme_of(cfg), parse_task(cfg.task), cfg.eps, opt);
  emit_json(cfg, {{"command", "cost"}, {"problem", problem_summary(problem)}, {"report", report_json(rep)}},
            out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::string& values, int jobs,
              bool kappa_exact, std::ostream& out) {
  const auto problem = load_problem_file(cfg.problem);
  SweepConfig sc;
  sc.axis = parse_sweep_axis(axis);
  sc.values = split_values(values);
  sc.scheme = scheme_of(cfg);
  sc.task = parse_task(cfg.task);
  sc.eps = cfg.eps;
  sc.Mp = mp_of(cfg);
  sc.jobs = jobs;
  sc.kappa_exact = kappa_exact;
  const auto rows = sweep(problem, sc);
  if (cfg.format == "csv") {
    emit(cfg, sweep_csv(rows), out);
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json j{{"axis", r.axis},
           {"value", r.value},
           {"scheme", r.scheme},
           {"task", r.task},
           {"T", r.T},
           {"eps", r.eps}};
    if (r.error.empty()) {
      j.update({{"h", r.h},
                {"M", r.M},
                {"K", optional_int(r.K)},
                {"Mp", r.Mp},
                {"kappa_exact", r.kappa_exact ? json(*r.kappa_exact) : json(nullptr)},
                {"kappa_bound", r.kappa_bound},
                {"hypothesis", r.hypothesis ? json(*r.hypothesis) : json(nullptr)},
                {"state_error_history", r.state_error_history},
                {"state_error_final", r.state_error_final},
                {"success_probability", r.success_probability},
                {"queries_OA", r.queries_OA}});
    } else {
      j["error"] = r.error;
    }
    arr.push_back(j);
  }
  emit_json(cfg, {{"command", "sweep"}, {"rows", arr}}, out);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& filter, const std::string& fault,
               int scale, std::ostream& out) {
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.filter = filter;
  opt.scale = scale;
  if (fault == "padding") {
    opt.fault = Fault::Padding;
  } else if (!fault.empty() && fault != "none") {
    throw Error(ErrorCode::ParseError, "unknown fault '" + fault + "'");
  }
  const auto results = run_verification(opt);
  bool ok = true;
  std::ostringstream text;
  json arr = json::array();
  for (const auto& r : results) {
    ok = ok && r.pass;
    text << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks";
    if (!r.pass) text << ", " << r.failures << " failed";
    text << "): " << r.detail << "\n";
    arr.push_back({{"suite", r.name},
                   {"pass", r.pass},
                   {"checks", r.checks},
                   {"failures", r.failures},
                   {"detail", r.detail}});
  }
  if (cfg.format == "json") {
    emit_json(cfg, {{"command", "verify"}, {"seed", cfg.seed}, {"pass", ok}, {"suites", arr}}, out);
  } else {
    emit(cfg, text.str(), out);
  }
  return ok ? kExitOk : kExitHypothesis;
}

struct HeatFlags {
  double a = 1.0;
  double b_vel = 0.0;
  int d = 1;
  int n_x = 4;
  double c = 0.0;
  double f = 0.0;
  double T = 1.0;
};

int cmd_app_heat(const RunConfig& cfg, const HeatFlags& hf, bool with_cost, std::ostream& out) {
  HeatParams hp;
  hp.a = hf.a;
  hp.b_vel = hf.b_vel;
  hp.d = hf.d;
  hp.n_x = hf.n_x;
  hp.T = hf.T;
  const double c = hf.c;
  const double f = hf.f;
  if (c != 0.0) hp.c = [c](double, std::span<const double>) { return c; };
  if (f != 0.0) hp.f = [f](double, std::span<const double>) { return f; };
  const auto problem = make_heat_problem(hp);
  const auto cert = certify_dissipativity(problem, SampleGrid::uniform(hf.T));
  const double nx2 = static_cast<double>(hf.n_x) * hf.n_x;
  const double bound = -8.0 * hf.a * hf.d * nx2 / ((hf.n_x + 2.0) * (hf.n_x + 2.0));
  const double s = std::sin(std::numbers::pi / (2.0 * (hf.n_x + 2.0)));
  const double sharp = -8.0 * hf.a * hf.d * nx2 * s * s;
  const Matrix a0 = problem.A(0.0);
  const double lam = max_eigenvalue_hermitian(a0 + a0.adjoint());
  json doc{{"command", "app-heat"},
           {"problem", problem_summary(problem)},
           {"certificate",
            {{"measured_eta", cert.measured_eta}, {"worst_time", cert.worst_time}, {"pass", cert.pass}}},
           {"lambda_max_A_plus_Adag", lam},
           {"sine_formula", sharp},
           {"bound", bound},
           {"bound_holds", lam <= bound + 1e-9 * std::abs(bound)}};
  if (with_cost) {
    const Task task = parse_task(cfg.task);
    doc["report"] = report_json(cost_model(problem, scheme_of(cfg), task, cfg.eps));
  }
  emit_json(cfg, doc, out);
  return kExitOk;
}

struct NonHermitianFlags {
  double gamma = 1.0;
  double omega = 1.0;
  double T = 1.0;
  bool time_dependent = false;
};

int cmd_app_nonhermitian(const RunConfig& cfg, const NonHermitianFlags& nf, bool with_cost,
                         std::ostream& out) {
  std::optional<DissipativeOdeProblem> problem;
  std::optional<Matrix> closed;
  if (!cfg.problem.empty()) {
    problem.emplace(load_problem_file(cfg.problem));
  } else {
    Matrix sx(2, 2), sz(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    sz << 1.0, 0.0, 0.0, -1.0;
    const double g = nf.gamma;
    const double w = nf.omega;
    Vector u0(2);
    u0 << 1.0, 0.0;
    Matrix lm = -g * Matrix::Identity(2, 2);
    const double T = nf.T;
    if (nf.time_dependent) {
      problem.emplace(make_non_hermitian_problem([sz, w](double t) -> Matrix { return w * t * sz; },
                                                 [lm](double) { return lm; }, u0, T));
      Matrix u = Matrix::Zero(2, 2);
      u(0, 0) = std::exp(cplx(-g * T, -w * T * T / 2.0));
      u(1, 1) = std::exp(cplx(-g * T, w * T * T / 2.0));
      closed = u;
    } else {
      problem.emplace(make_non_hermitian_problem([sx, w](double) -> Matrix { return w * sx; },
                                                 [lm](double) { return lm; }, u0, T));
      closed = std::exp(-g * T) *
               (std::cos(w * T) * Matrix::Identity(2, 2) - kI * std::sin(w * T) * sx);
    }
  }
  const auto cert = certify_dissipativity(*problem, SampleGrid::uniform(problem->horizon()));
  const Matrix a0 = problem->A(0.0);
  json doc{{"command", "app-nonhermitian"},
           {"problem", problem_summary(*problem)},
           {"certificate",
            {{"measured_eta", cert.measured_eta}, {"worst_time", cert.worst_time}, {"pass", cert.pass}}}};
  if (closed) {
    const Matrix u = propagator(*problem, 0.0, problem->horizon(), 1e-12).value;
    doc["propagator_error"] = spectral_norm(u - *closed);
  }
  if (with_cost) {
    const Task task = problem->homogeneous() && cfg.task == "history" ? Task::HistoryHomogeneous
                                                                     : parse_task(cfg.task);
    doc["report"] = report_json(cost_model(*problem, scheme_of(cfg), task, cfg.eps));
  }
  emit_json(cfg, doc, out);
  return kExitOk;
}

void add_scheme_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--scheme", cfg.scheme, "euler | trap | dyson")
      ->check(CLI::IsMember({"euler", "trap", "trapezoidal", "dyson"}));
  app->add_option("--dyson-order", cfg.dyson_order, "Dyson truncation order K")
      ->check(CLI::Range(1, 40));
  app->add_option("--quad-nodes", cfg.quad_nodes, "Dyson quadrature nodes q")
      ->check(CLI::Range(2, 1 << 16));
}

void add_task_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--task", cfg.task, "history | final | history-homogeneous")
      ->check(CLI::IsMember({"history", "final", "history-homogeneous", "homogeneous"}));
  app->add_option("--eps", cfg.eps, "target accuracy in (0, 1)");
}

void add_output_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--format", cfg.format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app->add_option("--output,-o", cfg.output, "write the report to a file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dissipode: all-at-once solvers and cost models for dissipative linear ODEs"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* solve = app.add_subcommand("solve", "select a step, solve the padded system, compare");
  solve->add_option("--problem", cfg.problem, "problem JSON file")->required();
  add_scheme_flags(solve, cfg);
  add_task_flags(solve, cfg);
  solve->add_option("--M", cfg.M, "override the number of steps");
  solve->add_option("--mp", cfg.mp, "padding copies: auto or an integer");
  solve->add_option("--export-mtx", cfg.export_mtx, "write <base>.mtx, <base>_rhs.mtx, <base>.json");
  add_output_flags(solve, cfg);

  auto* kappa = app.add_subcommand("kappa", "exact and bounded condition numbers");
  kappa->add_option("--problem", cfg.problem, "problem JSON file")->required();
  add_scheme_flags(kappa, cfg);
  kappa->add_option("--M", cfg.M, "number of steps")->required();
  kappa->add_option("--mp", cfg.mp, "padding copies");
  add_output_flags(kappa, cfg);

  auto* cost = app.add_subcommand("cost", "query-cost model report");
  cost->add_option("--problem", cfg.problem, "problem JSON file")->required();
  add_scheme_flags(cost, cfg);
  add_task_flags(cost, cfg);
  cost->add_option("--mp", cfg.mp, "padding copies: auto or an integer");
  add_output_flags(cost, cfg);

  std::string axis = "T";
  std::string values;
  int jobs = 1;
  bool no_kappa_exact = false;
  auto* sw = app.add_subcommand("sweep", "parameter sweep to CSV");
  sw->add_option("--problem", cfg.problem, "problem JSON file")->required();
  add_scheme_flags(sw, cfg);
  add_task_flags(sw, cfg);
  sw->add_option("--axis", axis, "T | eps | scheme | Mp")
      ->check(CLI::IsMember({"T", "eps", "scheme", "Mp", "mp"}));
  sw->add_option("--values", values, "comma-separated axis values (may be empty)");
  sw->add_option("--mp", cfg.mp, "padding copies: auto or an integer");
  sw->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);
  sw->add_flag("--no-kappa-exact", no_kappa_exact, "skip the dense SVD column");
  add_output_flags(sw, cfg);

  std::string filter;
  std::string fault;
  int scale = 1;
  auto* verify = app.add_subcommand("verify", "randomized invariant suites");
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--filter", filter, "run a single suite");
  verify->add_option("--inject-fault", fault, "none | padding");
  verify->add_option("--scale", scale, "trial-count multiplier")->check(CLI::PositiveNumber);
  add_output_flags(verify, cfg);

  HeatFlags hf;
  bool heat_cost = false;
  auto* heat = app.add_subcommand("app-heat", "semi-discretized heat equation");
  heat->add_option("--a", hf.a, "diffusivity");
  heat->add_option("--b-vel", hf.b_vel, "flow velocity");
  heat->add_option("--d", hf.d, "spatial dimension")->check(CLI::PositiveNumber);
  heat->add_option("--nx", hf.n_x, "grid intervals per axis")->check(CLI::PositiveNumber);
  heat->add_option("--c", hf.c, "constant potential (<= 0)");
  heat->add_option("--f", hf.f, "constant source");
  heat->add_option("--T", hf.T, "horizon");
  heat->add_flag("--cost", heat_cost, "append a cost-model report");
  add_scheme_flags(heat, cfg);
  add_task_flags(heat, cfg);
  add_output_flags(heat, cfg);

  NonHermitianFlags nf;
  bool nh_cost = false;
  auto* nh = app.add_subcommand("app-nonhermitian", "dissipative non-Hermitian dynamics");
  nh->add_option("--problem", cfg.problem, "optional non_hermitian problem JSON");
  nh->add_option("--gamma", nf.gamma, "loss rate, L = -gamma I")->check(CLI::PositiveNumber);
  nh->add_option("--omega", nf.omega, "Hamiltonian scale");
  nh->add_option("--T", nf.T, "horizon");
  nh->add_flag("--time-dependent", nf.time_dependent, "use H(t) = omega t sigma_z");
  nh->add_flag("--cost", nh_cost, "append a cost-model report");
  add_scheme_flags(nh, cfg);
  add_task_flags(nh, cfg);
  add_output_flags(nh, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (cfg.format.empty()) cfg.format = *sw ? "csv" : *verify ? "text" : "json";

  try {
    if (*solve) return cmd_solve(cfg, out);
    if (*kappa) return cmd_kappa(cfg, out);
    if (*cost) return cmd_cost(cfg, out);
    if (*sw) return cmd_sweep(cfg, axis, values, jobs, !no_kappa_exact, out);
    if (*verify) return cmd_verify(cfg, filter, fault, scale, out);
    if (*heat) return cmd_app_heat(cfg, hf, heat_cost, out);
    if (*nh) return cmd_app_nonhermitian(cfg, nf, nh_cost, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_hypothesis_violation(e.code()) ? kExitHypothesis : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dissipode::cli
