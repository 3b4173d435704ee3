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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "cli.hpp"
#include "dissipode/analysis.hpp"
#include "dissipode/block_system.hpp"
#include "dissipode/error.hpp"
#include "dissipode/problem_io.hpp"
#include "dissipode/reference_oracle.hpp"
#include "dissipode/schemes.hpp"
#include "dissipode/verification.hpp"

namespace py = pybind11;
using namespace dissipode;

namespace {

SchemeKind scheme_arg(const std::string& name, int K, int q) { return SchemeKind::parse(name, K, q); }

py::dict selection_dict(const StepSelection& s) {
  py::dict d;
  d["h"] = s.h;
  d["M"] = s.M;
  d["K"] = s.K ? py::object(py::int_(*s.K)) : py::none();
  d["scheme"] = s.scheme.name();
  d["quad_nodes"] = s.scheme.quad_nodes;
  d["tol_propagator"] = s.budget.tol_propagator;
  d["tol_inhom"] = s.budget.tol_inhom;
  d["worst_e_prop"] = s.worst_e_prop;
  d["worst_e_inhom"] = s.worst_e_inhom;
  return d;
}

Matrix stack_blocks(const SolutionBundle& s, std::size_t count) {
  const Eigen::Index n = s.blocks.front().size();
  Matrix out(static_cast<Eigen::Index>(count), n);
  for (std::size_t i = 0; i < count; ++i) out.row(static_cast<Eigen::Index>(i)) = s.blocks[i].transpose();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "All-at-once linear systems for dissipative linear ODEs";

  static py::exception<Error> error_type(m, "DissipodeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      exc.attr("hypothesis") = is_hypothesis_violation(e.code());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<DissipativeOdeProblem>(m, "Problem")
      .def_property_readonly("dim", &DissipativeOdeProblem::dim)
      .def_property_readonly("T", &DissipativeOdeProblem::horizon)
      .def_property_readonly("eta", &DissipativeOdeProblem::eta)
      .def_property_readonly("alpha_A", &DissipativeOdeProblem::alpha_A)
      .def_property_readonly("alpha_b", &DissipativeOdeProblem::alpha_b)
      .def_property_readonly("homogeneous", &DissipativeOdeProblem::homogeneous)
      .def_property_readonly("diagnostic", &DissipativeOdeProblem::diagnostic)
      .def_property_readonly("label", &DissipativeOdeProblem::label)
      .def_property_readonly("u0", &DissipativeOdeProblem::u0)
      .def("A", &DissipativeOdeProblem::A, py::arg("t"))
      .def("b", &DissipativeOdeProblem::b, py::arg("t"))
      .def("with_horizon", &DissipativeOdeProblem::with_horizon, py::arg("T"))
      .def("summary", [](const DissipativeOdeProblem& p) { return problem_summary(p).dump(); });

  m.def("load_problem", &load_problem_file, py::arg("path"));
  m.def(
      "problem_from_json", [](const std::string& text) { return problem_from_json(nlohmann::json::parse(text)); },
      py::arg("text"));
  m.def(
      "constant_problem",
      [](const Matrix& A, const Vector& u0, double T, std::optional<Vector> b) {
        return make_constant_problem(A, u0, T, std::move(b));
      },
      py::arg("A"), py::arg("u0"), py::arg("T"), py::arg("b") = py::none());

  m.def(
      "select_step",
      [](const DissipativeOdeProblem& p, const std::string& scheme, double eps, const std::string& task,
         int K, int q) {
        return selection_dict(select_step(p, scheme_arg(scheme, K, q), eps, parse_task(task)));
      },
      py::arg("problem"), py::arg("scheme") = "euler", py::arg("eps") = 0.1, py::arg("task") = "history",
      py::arg("K") = 1, py::arg("q") = 16);

  m.def(
      "solve",
      [](const DissipativeOdeProblem& p, const std::string& scheme, int M, int Mp, int K, int q) {
        const double h = p.horizon() / M;
        const auto sol = forward_solve(assemble(p, scheme_arg(scheme, K, q), M, Mp, h));
        py::dict d;
        d["h"] = h;
        d["history"] = stack_blocks(sol, static_cast<std::size_t>(M) + 1);
        d["blocks"] = stack_blocks(sol, sol.blocks.size());
        d["residual"] = sol.residual;
        d["success_probability"] = success_probability(sol, M, Mp);
        return d;
      },
      py::arg("problem"), py::arg("scheme") = "euler", py::arg("M") = 10, py::arg("Mp") = 1,
      py::arg("K") = 1, py::arg("q") = 16);

  m.def(
      "reference_history",
      [](const DissipativeOdeProblem& p, int M, double tol) {
        return stack_blocks(exact_history(p, M, p.horizon() / M, tol), static_cast<std::size_t>(M) + 1);
      },
      py::arg("problem"), py::arg("M"), py::arg("tol") = 1e-12);

  m.def(
      "state_errors",
      [](const DissipativeOdeProblem& p, const std::string& scheme, int M, int Mp, int K, int q, double tol) {
        const double h = p.horizon() / M;
        const auto sol = forward_solve(assemble(p, scheme_arg(scheme, K, q), M, Mp, h));
        const auto ref = exact_history(p, M, h, tol);
        return py::make_tuple(state_error_history(sol, ref), state_error_final(sol, ref));
      },
      py::arg("problem"), py::arg("scheme") = "euler", py::arg("M") = 10, py::arg("Mp") = 1,
      py::arg("K") = 1, py::arg("q") = 16, py::arg("tol") = 1e-12);

  m.def(
      "kappa",
      [](const DissipativeOdeProblem& p, const std::string& scheme, int M, int Mp, int K, int q) {
        const auto sys = assemble(p, scheme_arg(scheme, K, q), M, Mp, p.horizon() / M);
        py::dict d;
        d["exact"] = kappa_exact(sys);
        d["bound"] = py::none();
        if (p.eta() > 0.0 && check_lemma_hypothesis(p, sys).pass) {
          d["bound"] = kappa_bound_formula(sys, p.eta(), p.horizon()).kappa;
        }
        return d;
      },
      py::arg("problem"), py::arg("scheme") = "euler", py::arg("M") = 10, py::arg("Mp") = 1,
      py::arg("K") = 1, py::arg("q") = 16);

  m.def(
      "optimal_padding",
      [](int M, double eta, double T) {
        const auto c = optimal_padding(M, eta, T);
        return py::make_tuple(c.Mp_rule, c.Mp_continuous);
      },
      py::arg("M"), py::arg("eta"), py::arg("T"));

  m.def(
      "verify",
      [](std::uint64_t seed, const std::string& filter) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.filter = filter;
        py::list out;
        for (const auto& r : run_verification(opt)) {
          out.append(py::make_tuple(r.name, r.pass, r.checks, r.failures, r.detail));
        }
        return out;
      },
      py::arg("seed") = VerifyOptions{}.seed, py::arg("filter") = "");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI invocation in-process; returns (exit_code, stdout, stderr).");
}
