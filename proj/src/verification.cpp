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

#include "dissipode/verification.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "dissipode/analysis.hpp"
#include "dissipode/block_encoding.hpp"
#include "dissipode/block_system.hpp"
#include "dissipode/error.hpp"
#include "dissipode/random_problems.hpp"
#include "dissipode/reference_oracle.hpp"

namespace dissipode {

namespace {

void check(SuiteResult& r, bool ok, const std::string& what) {
  ++r.checks;
  if (!ok) {
    ++r.failures;
    r.pass = false;
    if (r.detail.empty()) r.detail = what;
  }
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RandomProblemOptions random_options(Rng& rng, bool inhomogeneous) {
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomProblemOptions o;
  o.N = dim(rng);
  o.eta = 0.5 + u(rng);
  o.spread = 0.6 * u(rng);
  o.skew = 0.8 * u(rng);
  o.omega = 0.5 + 1.5 * u(rng);
  o.T = 1.0 + u(rng);
  o.inhomogeneous = inhomogeneous;
  return o;
}

void suite_stability(SuiteResult& r, Rng& rng, int scale) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 0; p < 10 * scale; ++p) {
    const auto prob = make_random_problem(rng, random_options(rng, false));
    for (int k = 0; k < 5; ++k) {
      double t0 = u(rng) * prob.horizon();
      double t1 = u(rng) * prob.horizon();
      if (t0 > t1) std::swap(t0, t1);
      const Matrix U = propagator(prob, t0, t1, 1e-11).value;
      const double upper = std::exp(-prob.eta() * (t1 - t0)) + 1e-8;
      const double lower = std::exp(-prob.alpha_A() * (t1 - t0)) - 1e-8;
      check(r, spectral_norm(U) <= upper,
            "decay bound: ||U|| = " + str(spectral_norm(U)) + " > " + str(upper));
      check(r, min_singular_value(U) >= lower,
            "lower bound: sigma_min = " + str(min_singular_value(U)) + " < " + str(lower));
    }
  }
}

void suite_block_norm(SuiteResult& r, Rng& rng, int scale) {
  std::uniform_int_distribution<int> nb(1, 4);
  std::uniform_int_distribution<int> db(1, 3);
  for (int trial = 0; trial < 50 * scale; ++trial) {
    const int n = nb(rng);
    const int d = db(rng);
    const Matrix m = random_complex(rng, n * d, n * d);
    const double bound = block_norm_bound(block_norms(m, d));
    const double exact = spectral_norm(m);
    check(r, exact <= bound * (1.0 + 1e-12),
          "block-norm bound " + str(bound) + " below exact norm " + str(exact));
  }
}

void suite_condition_number(SuiteResult& r, Rng& rng, int scale) {
  std::uniform_int_distribution<int> mdist(2, 24);
  std::uniform_int_distribution<int> mpdist(1, 8);
  const SchemeKind schemes[] = {SchemeKind::euler(), SchemeKind::trapezoidal(),
                                SchemeKind::dyson(4)};
  int applicable = 0;
  for (int trial = 0; trial < 12 * scale; ++trial) {
    auto opts = random_options(rng, true);
    opts.N = std::min(opts.N, 3);
    const auto prob = make_random_problem(rng, opts);
    const auto& scheme = schemes[trial % 3];
    int M = mdist(rng);
    if (scheme.is_dyson()) M = std::max(M, static_cast<int>(std::ceil(2.0 * prob.alpha_A() * prob.horizon())));
    const double h = prob.horizon() / M;
    const auto sys = assemble(prob, scheme, M, mpdist(rng), h);
    const auto hyp = check_lemma_hypothesis(prob, sys);
    if (!hyp.pass) continue;
    ++applicable;
    const double exact = kappa_exact(sys);
    const double bound = kappa_bound_formula(sys, prob.eta(), prob.horizon()).kappa;
    check(r, exact <= bound, "kappa_exact " + str(exact) + " exceeds kappa_bound " + str(bound));
  }
  check(r, applicable > 0, "no sampled system met the lemma hypothesis");
}

void suite_inverse_blocks(SuiteResult& r, Rng& rng, int scale) {
  for (int trial = 0; trial < 3 * scale; ++trial) {
    auto opts = random_options(rng, true);
    opts.N = std::min(opts.N, 2);
    const auto prob = make_random_problem(rng, opts);
    const int M = 6;
    const auto sys = assemble(prob, trial % 2 ? SchemeKind::trapezoidal() : SchemeKind::euler(), M,
                              3, prob.horizon() / M);
    const Matrix inv = sys.dense().inverse();
    const auto n = sys.N;
    double worst = 0.0;
    for (int i = 0; i < sys.block_rows(); ++i) {
      for (int j = 0; j < sys.block_rows(); ++j) {
        worst = std::max(worst, (inverse_block(sys, i, j) - inv.block(i * n, j * n, n, n)).norm());
      }
    }
    check(r, worst <= 1e-9, "inverse_block deviates from the dense inverse by " + str(worst));
  }
}

void suite_convergence(SuiteResult& r, Rng& rng, int scale) {
  const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  std::vector<double> lx;
  for (double h : hs) lx.push_back(std::log(h));
  for (int trial = 0; trial < 3 * scale; ++trial) {
    auto opts = random_options(rng, false);
    opts.T = 1.0;
    const auto prob = make_random_problem(rng, opts);
    for (auto scheme : {SchemeKind::euler(), SchemeKind::trapezoidal()}) {
      std::vector<double> ly;
      for (double h : hs) ly.push_back(std::log(local_errors(prob, scheme, 0, h, 1e-13).e_prop));
      const double slope = ls_slope(lx, ly);
      const bool euler = scheme.variant == SchemeKind::Variant::Euler;
      const double target = euler ? 2.0 : 3.0;
      const double tol = euler ? 0.2 : 0.25;
      check(r, std::abs(slope - target) <= tol,
            scheme.name() + " local-error slope " + str(slope) + " outside " + str(target) + "+-" +
                str(tol));
    }
  }
}

void suite_dyson_remainder(SuiteResult& r, Rng& rng, int scale) {
  for (int trial = 0; trial < 2 * scale; ++trial) {
    const auto n = std::uniform_int_distribution<int>(1, 3)(rng);
    Matrix a = 0.5 * random_hermitian(rng, n) + kI * random_hermitian(rng, n);
    a.diagonal().array() -= 1.0;
    const auto prob = make_constant_problem(a, random_unit_vector(rng, n), 1.0);
    const double h = 0.5 / prob.alpha_A();
    for (int K = 1; K <= 3; ++K) {
      const double bound = 2.0 * std::pow(prob.alpha_A() * h, K + 1) / std::tgamma(K + 2.0);
      const double e = local_errors(prob, SchemeKind::dyson(K, 64), 0, h, 1e-13).e_prop;
      check(r, e <= bound, "Dyson K=" + std::to_string(K) + " error " + str(e) + " > " + str(bound));
    }
  }
}

void suite_reconstruction(SuiteResult& r, Rng& rng, int scale) {
  for (int trial = 0; trial < scale; ++trial) {
    for (int n : {1, 2}) {
      auto opts = random_options(rng, false);
      opts.N = n;
      const auto prob = make_random_problem(rng, opts);
      for (double ah : {0.25, 0.5}) {
        for (int M = 1; M <= 3; ++M) {
          for (int Mp = 1; Mp <= 2; ++Mp) {
            const auto base = prob.with_horizon(M * ah / prob.alpha_A());
            const double h = ah / prob.alpha_A();
            for (bool trap : {false, true}) {
              const auto enc = trap ? trapezoidal_block_encoding(base, h, M, Mp)
                                    : euler_block_encoding(base, h, M, Mp);
              const auto sys = assemble(base, trap ? SchemeKind::trapezoidal() : SchemeKind::euler(),
                                        M, Mp, h);
              const Matrix dense = sys.dense();
              const double err =
                  (extract_top_left(enc, dense.rows(), dense.cols()) - dense).cwiseAbs().maxCoeff();
              check(r, err <= 1e-9, "block-encoding reconstruction error " + str(err));
              check(r, enc.unitarity_residual() <= 1e-10, "encoding is not unitary");
              check(r, enc.queries.oa == (trap ? 2 : 1), "O_A query count");
              check(r, std::abs(enc.factor - (2.0 + ah)) <= 1e-14, "factor law 2 + h alpha_A");
            }
          }
        }
      }
    }
  }
}

void suite_theorem_history(SuiteResult& r, Rng& rng, int scale) {
  for (int trial = 0; trial < 2 * scale; ++trial) {
    auto opts = random_options(rng, trial % 2 == 0);
    opts.N = std::min(opts.N, 3);
    const auto prob = make_random_problem(rng, opts);
    const Task task = prob.homogeneous() ? Task::HistoryHomogeneous : Task::History;
    for (auto scheme : {SchemeKind::trapezoidal(), SchemeKind::dyson(1)}) {
      const double eps = 0.1;
      const auto sel = select_step(prob, scheme, eps, task);
      const auto sol = forward_solve(assemble(prob, sel.scheme, sel.M, 1, sel.h));
      const auto ref = exact_history(prob, sel.M, sel.h, default_oracle_tol(eps));
      const double err = state_error_history(sol, ref);
      check(r, err <= eps, sel.scheme.name() + " history error " + str(err) + " > " + str(eps));
    }
  }
}

void suite_theorem_final(SuiteResult& r, Rng& rng, int scale) {
  for (int trial = 0; trial < 2 * scale; ++trial) {
    auto opts = random_options(rng, true);
    opts.N = std::max(2, std::min(opts.N, 3));
    opts.source = 1.0;
    const auto prob = make_random_problem(rng, opts);
    const double eps = 0.1;
    const auto rep = cost_model(prob, SchemeKind::trapezoidal(), Task::Final, eps);
    const auto scheme = SchemeKind::trapezoidal();
    const auto sol = forward_solve(assemble(prob, scheme, rep.M, rep.Mp, rep.h));
    const auto ref = exact_history(prob, rep.M, rep.h, default_oracle_tol(eps));
    const double err = state_error_final(sol, ref);
    check(r, err <= eps, "final-state error " + str(err) + " > " + str(eps));
    const double p = success_probability(sol, rep.M, rep.Mp);
    check(r, p >= rep.success_prob_lower,
          "success probability " + str(p) + " below floor " + str(rep.success_prob_lower));
  }
}

void suite_padding(SuiteResult& r, Rng& rng, int scale, Fault fault) {
  for (int trial = 0; trial < 2 * scale; ++trial) {
    const auto prob = make_random_problem(rng, random_options(rng, true));
    const int M = 8;
    const int Mp = 4;
    auto sys = assemble(prob, SchemeKind::euler(), M, Mp, prob.horizon() / M);
    if (fault == Fault::Padding) sys.sub_blocks.back() *= 1.01;
    const Matrix id = Matrix::Identity(sys.N, sys.N);
    bool rows_ok = true;
    for (int k = M + 1; k < M + Mp; ++k) {
      rows_ok = rows_ok && sys.diag_blocks[k] == id && sys.sub_blocks[k - 1] == id &&
                sys.rhs_blocks[k].isZero(0.0);
    }
    check(r, rows_ok, "padding rows: L = R = I and v = 0");
    const auto sol = forward_solve(sys);
    bool copies = true;
    for (int k = M + 1; k < M + Mp; ++k) copies = copies && (sol.blocks[k] - sol.blocks[M]).norm() == 0.0;
    check(r, copies, "padding copies: u_k == u_M for k >= M");
    check(r, sys.rhs_blocks[0] == prob.u0(), "first rhs block equals u0");
  }
}

using SuiteFn = std::function<void(SuiteResult&, Rng&, int, Fault)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"stability", [](auto& r, auto& g, int s, Fault) { suite_stability(r, g, s); }},
      {"block_norm", [](auto& r, auto& g, int s, Fault) { suite_block_norm(r, g, s); }},
      {"condition_number", [](auto& r, auto& g, int s, Fault) { suite_condition_number(r, g, s); }},
      {"inverse_blocks", [](auto& r, auto& g, int s, Fault) { suite_inverse_blocks(r, g, s); }},
      {"convergence", [](auto& r, auto& g, int s, Fault) { suite_convergence(r, g, s); }},
      {"dyson_remainder", [](auto& r, auto& g, int s, Fault) { suite_dyson_remainder(r, g, s); }},
      {"reconstruction", [](auto& r, auto& g, int s, Fault) { suite_reconstruction(r, g, s); }},
      {"theorem_history", [](auto& r, auto& g, int s, Fault) { suite_theorem_history(r, g, s); }},
      {"theorem_final", [](auto& r, auto& g, int s, Fault) { suite_theorem_final(r, g, s); }},
      {"padding", [](auto& r, auto& g, int s, Fault f) { suite_padding(r, g, s, f); }},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
  const auto& names = verification_suites();
  if (!options.filter.empty() &&
      std::find(names.begin(), names.end(), options.filter) == names.end()) {
    throw Error(ErrorCode::ParseError, "unknown suite '" + options.filter + "'");
  }
  std::vector<SuiteResult> results;
  std::size_t index = 0;
  for (const auto& [name, fn] : registry()) {
    ++index;
    if (!options.filter.empty() && options.filter != name) continue;
    // Each suite draws from its own stream so that filtering does not shift
    // the random numbers seen by the others.
    Rng rng(options.seed + 0x9E3779B97F4A7C15ULL * index);
    SuiteResult r;
    r.name = name;
    try {
      fn(r, rng, std::max(1, options.scale), options.fault);
    } catch (const Error& e) {
      check(r, false, std::string("unexpected error: ") + e.what());
    }
    if (r.pass && r.detail.empty()) r.detail = std::to_string(r.checks) + " checks";
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace dissipode
