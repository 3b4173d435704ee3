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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dissipode/analysis.hpp"
#include "dissipode/error.hpp"
#include "dissipode/random_problems.hpp"
#include "dissipode/reference_oracle.hpp"

namespace dissipode {
namespace {

DissipativeOdeProblem scalar(double a, double T, std::optional<double> b = std::nullopt,
                             double u0 = 1.0) {
  Matrix m(1, 1);
  m(0, 0) = a;
  std::optional<Vector> src;
  if (b) src = Vector::Constant(1, *b);
  return make_constant_problem(m, Vector::Constant(1, u0), T, src);
}

SolutionBundle bundle(std::vector<double> values, int M, double h, int Mp = 1) {
  SolutionBundle s;
  for (double v : values) s.blocks.push_back(Vector::Constant(1, v));
  s.M = M;
  s.Mp = Mp;
  s.h = h;
  s.refresh_norms();
  return s;
}

TEST(StateError, IdenticalIsZero) {
  const auto a = bundle({1.0, 0.5, 0.25}, 2, 0.5);
  EXPECT_EQ(state_error_history(a, a), 0.0);
  EXPECT_EQ(state_error_final(a, a), 0.0);
}

TEST(StateError, EulerScalarHistory) {
  const auto sol = forward_solve(assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 2, 1, 0.5));
  const auto ref = exact_history(scalar(-1.0, 1.0), 2, 0.5, 1e-12);
  // Independent arithmetic: ||[1,.5,.25]/n1 - [1,e^-.5,e^-1]/n2||.
  EXPECT_NEAR(state_error_history(sol, ref), 0.11562355410554997, 1e-10);
  EXPECT_EQ(state_error_final(sol, ref), 0.0);
}

TEST(StateError, HalvingStepReducesHistoryError) {
  const auto p = scalar(-1.0, 1.0);
  const auto e2 = state_error_history(forward_solve(assemble(p, SchemeKind::euler(), 2, 1, 0.5)),
                                      exact_history(p, 2, 0.5, 1e-12));
  const auto e4 = state_error_history(forward_solve(assemble(p, SchemeKind::euler(), 4, 1, 0.25)),
                                      exact_history(p, 4, 0.25, 1e-12));
  EXPECT_LT(e4, e2);
}

TEST(StateError, TwoComponentFinalAngle) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -2.0;
  const Vector u0 = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  const auto p = make_constant_problem(a, u0, 1.0);
  const auto sol = forward_solve(assemble(p, SchemeKind::euler(), 4, 1, 0.25));
  const auto ref = exact_history(p, 4, 0.25, 1e-12);
  EXPECT_NEAR(state_error_final(sol, ref), 0.15733043504245628, 1e-10);
}

TEST(StateError, ShapeAndZeroChecks) {
  const auto a = bundle({1.0, 0.5, 0.25}, 2, 0.5);
  const auto b = bundle({1.0, 0.5}, 1, 1.0);
  try {
    state_error_history(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  SolutionBundle z = bundle({1.0, 0.0}, 1, 1.0);
  z.blocks[1] = Vector::Zero(2);
  z.blocks[0] = Vector::Ones(2);
  SolutionBundle r = z;
  r.blocks[1] = Vector::Ones(2);
  try {
    state_error_final(z, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroFinalState);
  }
}

TEST(SuccessProbability, PaddedExample) {
  const auto s = bundle({1.0, 0.5, 0.25, 0.25}, 2, 0.5, 2);
  EXPECT_NEAR(success_probability(s, 2, 2), 0.125 / 1.375, 1e-15);
  EXPECT_NEAR(success_probability(s, 2, 2), 0.0909090909, 1e-10);
  const auto flat = bundle({1.0, 1.0, 1.0, 1.0}, 3, 0.25);
  EXPECT_NEAR(success_probability(flat, 3, 1), 0.25, 1e-15);
}

TEST(Padding, RuleAndContinuous) {
  const auto c = optimal_padding(100, 1.0, 10.0);
  EXPECT_EQ(c.Mp_rule, 10);
  EXPECT_NEAR(c.Mp_continuous, 8.541019662496845, 1e-12);
  EXPECT_THROW(optimal_padding(10, 0.0, 1.0), Error);
}

TEST(Padding, BruteForceArgmin) {
  for (double eT : {1.0, 2.0, 5.0, 10.0, 20.0}) {
    for (int M = 1; M <= 64; ++M) {
      const auto c = optimal_padding(M, eT, 1.0);
      int best = 1;
      for (int x = 2; x <= M; ++x) {
        if (padding_objective(M, x, eT, 1.0) < padding_objective(M, best, eT, 1.0)) best = x;
      }
      const int lo = static_cast<int>(std::floor(c.Mp_continuous));
      const int hi = static_cast<int>(std::ceil(c.Mp_continuous));
      EXPECT_TRUE(best == lo || best == hi || (hi <= 1 && best == 1))
          << "M=" << M << " eta T=" << eT << " argmin " << best << " x*=" << c.Mp_continuous;
    }
  }
}

TEST(QueryModel, FormulaByHand) {
  QueryModelInput in;
  in.task = Task::Final;
  in.M = 8;
  in.Mp = 2;
  in.eta = 1.0;
  in.T = 2.0;
  in.eps = 0.1;
  in.extremes = {1.0, 1.0, 1.0};
  in.q_scheme = 2;
  in.decay_ratio = 1.5;
  const auto out = model_queries(in);
  const double kappa = 4.0 * (8.0 / 2.0 + 2.0) * 2.0;
  const double epsp = 0.1 / (8.0 * std::sqrt(10.0) * 1.5);
  const double aa = std::ceil(4.0 * 1.5 * std::sqrt(10.0 / 2.0));
  EXPECT_DOUBLE_EQ(out.kappa, kappa);
  EXPECT_DOUBLE_EQ(out.eps_prime, epsp);
  EXPECT_DOUBLE_EQ(out.aa_rounds, aa);
  EXPECT_DOUBLE_EQ(out.queries_OA, std::ceil(2.0 * kappa * std::log(1.0 / epsp)) * aa);
  EXPECT_DOUBLE_EQ(out.queries_state_prep, std::ceil(kappa * std::log(1.0 / epsp)) * aa);
  in.task = Task::History;
  EXPECT_EQ(model_queries(in).aa_rounds, 1.0);
  EXPECT_EQ(model_queries(in).eps_prime, 0.1);
}

TEST(CostModel, ReportInvariants) {
  const auto r = cost_model(scalar(-1.0, 2.0, 1.0, 0.5), SchemeKind::trapezoidal(), Task::Final, 0.1);
  EXPECT_GE(r.queries_OA, 1.0);
  EXPECT_GE(r.aa_rounds, 1.0);
  EXPECT_EQ(r.Mp, r.padding.Mp_rule);
  EXPECT_EQ(r.q_scheme, 2);
  EXPECT_GE(r.decay_ratio, 1.0);
  EXPECT_GT(r.kappa_bound, r.kappa_model);
  EXPECT_TRUE(r.hypothesis_on_probes);
}

TEST(CostModel, FinalScalesLikeSqrtT) {
  const auto q = [](double T) {
    return cost_model(scalar(-1.0, T, 1.0, 0.5), SchemeKind::euler(), Task::Final, 0.1).queries_OA;
  };
  const double r = q(16.0) / q(4.0);
  EXPECT_GE(r, 1.6);
  EXPECT_LE(r, 2.6);
}

TEST(CostModel, HomogeneousDysonFlatInT) {
  const auto q = [](double T) {
    return cost_model(scalar(-1.0, T), SchemeKind::dyson(1), Task::HistoryHomogeneous, 0.1)
        .queries_OA;
  };
  EXPECT_LE(q(4.0) / q(1.0), 1.1);
  EXPECT_GE(q(4.0) / q(1.0), 1.0 / 1.1);
}

TEST(CostModel, EulerEpsHalvingDoubles) {
  const auto q = [](double eps) {
    return cost_model(scalar(-1.0, 1.0, 1.0), SchemeKind::euler(), Task::History, eps).queries_OA;
  };
  const double r = q(5e-4) / q(1e-3);
  EXPECT_GE(r, 1.8);
  EXPECT_LE(r, 2.4);
}

TEST(Sweep, EmptyValuesGiveHeaderOnly) {
  SweepConfig cfg;
  const auto rows = sweep(scalar(-1.0, 1.0), cfg);
  EXPECT_TRUE(rows.empty());
  EXPECT_EQ(sweep_csv(rows), sweep_csv_header() + "\r\n");
}

TEST(Sweep, TAxisPlateauAndErrorColumn) {
  SweepConfig cfg;
  cfg.axis = SweepAxis::T;
  cfg.values = {"1", "2", "4", "oops"};
  cfg.scheme = SchemeKind::trapezoidal();
  cfg.eps = 0.3;
  cfg.jobs = 2;
  const auto rows = sweep(scalar(-1.0, 1.0, 1.0), cfg);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[3].error.empty());
  for (int i = 0; i < 3; ++i) {
    ASSERT_TRUE(rows[i].error.empty()) << rows[i].error;
    ASSERT_TRUE(rows[i].kappa_exact.has_value());
    EXPECT_LE(rows[i].state_error_history, 0.3);
  }
  // kappa_exact is monotone and saturates.
  EXPECT_LE(*rows[0].kappa_exact, *rows[1].kappa_exact * (1 + 1e-12));
  EXPECT_LE(*rows[1].kappa_exact, *rows[2].kappa_exact * (1 + 1e-12));
  EXPECT_LE(*rows[2].kappa_exact / *rows[1].kappa_exact, 1.43);
}

TEST(Sweep, MpAxisMinimumNearContinuousOptimum) {
  SweepConfig cfg;
  cfg.axis = SweepAxis::Mp;
  cfg.task = Task::Final;
  cfg.scheme = SchemeKind::euler();
  cfg.eps = 0.3;
  cfg.kappa_exact = false;
  const auto p = scalar(-1.0, 4.0, 1.0, 0.5);
  // M does not depend on Mp, so one probe row fixes the continuous optimum.
  cfg.values = {"1"};
  const int M = sweep(p, cfg).at(0).M;
  const auto c = optimal_padding(M, p.eta(), p.horizon());
  cfg.values.clear();
  const int hi = static_cast<int>(std::ceil(3.0 * c.Mp_continuous));
  for (int mp = 1; mp <= hi; mp += std::max(1, hi / 60)) cfg.values.push_back(std::to_string(mp));
  const auto rows = sweep(p, cfg);
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].error.empty()) << rows[i].error;
    if (rows[i].queries_OA < rows[best].queries_OA) best = i;
  }
  const double argmin = rows[best].Mp;
  EXPECT_LE(std::abs(argmin - c.Mp_continuous) / c.Mp_continuous, 0.5)
      << "argmin " << argmin << " vs " << c.Mp_continuous;
}

TEST(Sweep, CsvIsDeterministicAcrossJobCounts) {
  SweepConfig cfg;
  cfg.axis = SweepAxis::Eps;
  cfg.values = {"0.3", "0.2", "0.1"};
  cfg.scheme = SchemeKind::trapezoidal();
  const auto p = scalar(-1.0, 1.0, 1.0);
  cfg.jobs = 1;
  const auto one = sweep_csv(sweep(p, cfg));
  cfg.jobs = 3;
  EXPECT_EQ(one, sweep_csv(sweep(p, cfg)));
  EXPECT_EQ(one.rfind(sweep_csv_header(), 0), 0u);
}

// End-to-end history theorem on a few instances per tolerance.
TEST(AnalysisProperties, HistoryTheorem) {
  Rng rng(31);
  for (double eps : {0.3, 0.1, 0.03}) {
    for (int k = 0; k < 3; ++k) {
      RandomProblemOptions o;
      o.N = 1 + k;
      o.inhomogeneous = k != 1;
      const auto p = make_random_problem(rng, o);
      const Task task = p.homogeneous() ? Task::HistoryHomogeneous : Task::History;
      const auto sel = select_step(p, SchemeKind::trapezoidal(), eps, task);
      const auto sol = forward_solve(assemble(p, sel.scheme, sel.M, 1, sel.h));
      EXPECT_LE(state_error_history(sol, exact_history(p, sel.M, sel.h, default_oracle_tol(eps))),
                eps);
    }
  }
}

TEST(AnalysisProperties, FinalTheoremAndSuccessFloor) {
  Rng rng(32);
  for (int k = 0; k < 3; ++k) {
    RandomProblemOptions o;
    o.N = 2 + k % 2;
    o.source = 1.0;
    const auto p = make_random_problem(rng, o);
    const auto rep = cost_model(p, SchemeKind::trapezoidal(), Task::Final, 0.1);
    const auto sol = forward_solve(assemble(p, SchemeKind::trapezoidal(), rep.M, rep.Mp, rep.h));
    const auto ref = exact_history(p, rep.M, rep.h, 1e-10);
    EXPECT_LE(state_error_final(sol, ref), 0.1);
    EXPECT_GE(success_probability(sol, rep.M, rep.Mp), rep.success_prob_lower);
  }
}

}  // namespace
}  // namespace dissipode
