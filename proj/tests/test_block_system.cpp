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
#include <numbers>

#include "dissipode/block_system.hpp"
#include "dissipode/error.hpp"
#include "dissipode/random_problems.hpp"

namespace dissipode {
namespace {

DissipativeOdeProblem scalar(double a, double T, std::optional<double> eta = std::nullopt) {
  Matrix m(1, 1);
  m(0, 0) = a;
  return make_constant_problem(m, Vector::Ones(1), T, std::nullopt, eta);
}

RealMatrix real(const Matrix& m) { return m.real(); }

TEST(Assemble, EulerScalarDense) {
  const auto sys = assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 2, 1, 0.5);
  RealMatrix expect(3, 3);
  expect << 1, 0, 0, -0.5, 1, 0, 0, -0.5, 1;
  EXPECT_TRUE(real(sys.dense()).isApprox(expect, 0.0));
  EXPECT_TRUE(sys.dense().imag().isZero(0.0));
  const Vector rhs = sys.dense_rhs();
  EXPECT_EQ(rhs(0), cplx(1.0));
  EXPECT_EQ(rhs(1), cplx(0.0));
  EXPECT_EQ(rhs(2), cplx(0.0));
}

TEST(Assemble, PaddingRows) {
  const auto sys = assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 2, 3, 0.5);
  EXPECT_EQ(sys.block_rows(), 5);
  EXPECT_EQ(sys.dimension(), 5);
  const RealMatrix d = real(sys.dense());
  EXPECT_EQ(d(3, 2), -1.0);
  EXPECT_EQ(d(3, 3), 1.0);
  EXPECT_EQ(d(4, 3), -1.0);
  EXPECT_EQ(d(4, 4), 1.0);
  EXPECT_EQ(sys.rhs_blocks[3](0), cplx(0.0));
  EXPECT_EQ(sys.rhs_blocks[4](0), cplx(0.0));
}

TEST(Assemble, DysonFirstOrderSubBlock) {
  const auto p = scalar(-0.8, 1.0);
  const auto sys = assemble(p, SchemeKind::dyson(1, 512), 4, 1, 0.25);
  EXPECT_NEAR(sys.sub_blocks[0](0, 0).real(), 1.0 - 0.25 * 0.8, 1e-12);
}

TEST(Assemble, StepCountMismatch) {
  try {
    assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 3, 1, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepCountMismatch);
  }
  EXPECT_THROW(assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 2, 0, 0.5), Error);
}

TEST(ForwardSolve, EulerScalar) {
  const auto sol = forward_solve(assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 2, 1, 0.5));
  ASSERT_EQ(sol.blocks.size(), 3u);
  EXPECT_EQ(sol.blocks[1](0), cplx(0.5));
  EXPECT_EQ(sol.blocks[2](0), cplx(0.25));
}

TEST(ForwardSolve, PaddingCopiesFinal) {
  const auto sol = forward_solve(assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 2, 2, 0.5));
  ASSERT_EQ(sol.blocks.size(), 4u);
  EXPECT_EQ(sol.blocks[3](0), cplx(0.25));
  EXPECT_EQ(sol.final_state()(0), cplx(0.25));
}

TEST(ForwardSolve, TrapezoidSingleStep) {
  const auto sol =
      forward_solve(assemble(scalar(-1.0, 0.5), SchemeKind::trapezoidal(), 1, 1, 0.5));
  EXPECT_NEAR(sol.blocks[1](0).real(), 0.6, 1e-15);
}

TEST(InverseBlock, ScalarExamples) {
  const auto sys = assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 2, 1, 0.5);
  EXPECT_TRUE(inverse_block(sys, 0, 2).isZero(0.0));
  EXPECT_EQ(inverse_block(sys, 1, 1)(0, 0), cplx(1.0));
  EXPECT_NEAR(inverse_block(sys, 2, 0)(0, 0).real(), 0.25, 1e-15);
  try {
    inverse_block(sys, 3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(InverseBlock, DiagonalIsPreviousLInverse) {
  Rng rng(21);
  RandomProblemOptions o;
  o.N = 2;
  const auto p = make_random_problem(rng, o);
  const auto sys = assemble(p, SchemeKind::trapezoidal(), 4, 1, p.horizon() / 4);
  for (int j = 1; j < 5; ++j) {
    EXPECT_TRUE(inverse_block(sys, j, j).isApprox(sys.diag_blocks[j].inverse(), 1e-12));
  }
}

TEST(BlockNormBound, SmallCases) {
  RealMatrix one(1, 1);
  one << 3.0;
  EXPECT_DOUBLE_EQ(block_norm_bound(one), 3.0);
  RealMatrix stacked(2, 2);
  stacked << 1.0, 0.0, 1.0, 0.0;
  EXPECT_NEAR(block_norm_bound(stacked), std::numbers::sqrt2, 1e-15);
  Matrix m = Matrix::Zero(4, 4);
  m.block(0, 0, 2, 2).setIdentity();
  m.block(2, 0, 2, 2).setIdentity();
  EXPECT_NEAR(spectral_norm(m), std::numbers::sqrt2, 1e-14);
}

TEST(BlockNormBound, RandomDominance) {
  Rng rng(22);
  for (int k = 0; k < 120; ++k) {
    const Matrix m = random_complex(rng, 6, 6);
    EXPECT_LE(spectral_norm(m), block_norm_bound(block_norms(m, 2)) * (1 + 1e-12));
  }
}

TEST(Kappa, ScalarFormulaAndExact) {
  const auto p = scalar(-1.0, 1.0);
  const auto sys = assemble(p, SchemeKind::euler(), 2, 1, 0.5);
  const auto b = kappa_bound_formula(sys, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(b.norm_bound, 3.5);
  EXPECT_NEAR(b.inv_bound, (4.0 * std::numbers::e + 1.0) * 2.0, 1e-12);
  const double exact = kappa_exact(sys);
  EXPECT_NEAR(exact, 2.0255996355063, 1e-10);
  EXPECT_LE(exact, b.kappa);
}

TEST(Kappa, PaddingGrowthIsAffine) {
  const auto p = scalar(-1.0, 1.0);
  const auto a = kappa_bound_formula(assemble(p, SchemeKind::euler(), 2, 2, 0.5), 1.0, 1.0);
  const auto b = kappa_bound_formula(assemble(p, SchemeKind::euler(), 2, 4, 0.5), 1.0, 1.0);
  EXPECT_NEAR(b.inv_bound - a.inv_bound, 2.0 * (1.0 + 1.0), 1e-12);
}

TEST(Kappa, HypothesisEnforced) {
  // Euler with h alpha_A = 1.9 misses the lemma hypothesis on the first step.
  const auto p = scalar(-1.9, 1.0);
  const auto sys = assemble(p, SchemeKind::euler(), 1, 1, 1.0);
  EXPECT_FALSE(check_lemma_hypothesis(p, sys).pass);
  try {
    kappa_bound(p, sys);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
    EXPECT_TRUE(is_hypothesis_violation(e.code()));
  }
}

TEST(Kappa, IdentitySystem) {
  AllAtOnceSystem sys;
  sys.M = 1;
  sys.Mp = 1;
  sys.N = 1;
  sys.h = 1.0;
  sys.diag_blocks = {Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  sys.sub_blocks = {Matrix::Zero(1, 1)};
  sys.rhs_blocks = {Vector::Ones(1), Vector::Zero(1)};
  EXPECT_DOUBLE_EQ(kappa_exact(sys), 1.0);
}

TEST(Kappa, DenseGuard) {
  const auto p = make_constant_problem(-Matrix::Identity(64, 64), Vector::Ones(64), 1.0);
  const auto sys = assemble(p, SchemeKind::euler(), 64, 1, 1.0 / 64);
  try {
    kappa_exact(sys);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionGuardExceeded);
  }
}

TEST(Kappa, ScalarSizesForTheRecord) {
  // Frozen SVD values at h = 0.1: the transient before the plateau.
  const auto k10 = kappa_exact(assemble(scalar(-1.0, 1.0), SchemeKind::euler(), 10, 1, 0.1));
  const auto k100 = kappa_exact(assemble(scalar(-1.0, 10.0), SchemeKind::euler(), 100, 1, 0.1));
  EXPECT_NEAR(k10, 9.4415, 1e-3);
  EXPECT_NEAR(k100, 18.3455, 1e-3);
}

// Plateau once M >= 8/(eta h).
TEST(BlockProperties, PlateauPastTransient) {
  const double h = 0.1;
  for (int M : {80, 120, 160}) {
    const double a = kappa_exact(assemble(scalar(-1.0, M * h), SchemeKind::euler(), M, 1, h));
    const double b =
        kappa_exact(assemble(scalar(-1.0, 2 * M * h), SchemeKind::euler(), 2 * M, 1, h));
    EXPECT_GE(a / b, 0.7);
    EXPECT_LE(a / b, 1.43);
  }
}

TEST(BlockProperties, NonDissipativeControlGrows) {
  const double h = 0.1;
  const auto k = [&](int M) {
    return kappa_exact(assemble(scalar(0.0, M * h, 0.0), SchemeKind::euler(), M, 1, h));
  };
  EXPECT_GE(k(100) / k(10), 5.0);
  EXPECT_GE(k(200) / k(100), 1.8);
}

TEST(BlockProperties, InverseFormulaMatchesDense) {
  Rng rng(23);
  for (int k = 0; k < 4; ++k) {
    RandomProblemOptions o;
    o.N = 1 + k % 3;
    const auto p = make_random_problem(rng, o);
    const int M = 8, Mp = 3;
    const auto sys = assemble(p, k % 2 ? SchemeKind::trapezoidal() : SchemeKind::dyson(3), M, Mp,
                              p.horizon() / M);
    ASSERT_LE(sys.dimension(), 128);
    const Matrix inv = sys.dense().inverse();
    const auto n = sys.N;
    for (int i = 0; i < M + Mp; ++i) {
      for (int j = 0; j < M + Mp; ++j) {
        EXPECT_LE((inverse_block(sys, i, j) - inv.block(i * n, j * n, n, n)).norm(), 1e-9);
      }
    }
  }
}

TEST(BlockProperties, SolveResidualAndDominance) {
  Rng rng(24);
  int checked = 0;
  for (int k = 0; k < 16; ++k) {
    RandomProblemOptions o;
    o.N = 1 + k % 4;
    const auto p = make_random_problem(rng, o);
    const int M = 8 + 4 * (k % 5);
    const int Mp = 1 + k % 6;
    const auto sys = assemble(p, k % 2 ? SchemeKind::euler() : SchemeKind::trapezoidal(), M, Mp,
                              p.horizon() / M);
    const auto sol = forward_solve(sys);
    const Vector x = sol.stacked();
    const Vector b = sys.dense_rhs();
    EXPECT_LE((sys.dense() * x - b).norm() / b.norm(), 1e-10 * (M + Mp));
    for (int m = M + 1; m < M + Mp; ++m) EXPECT_EQ(sol.blocks[m], sol.blocks[M]);
    if (!check_lemma_hypothesis(p, sys).pass) continue;
    ++checked;
    EXPECT_LE(kappa_exact(sys), kappa_bound_formula(sys, p.eta(), p.horizon()).kappa);
  }
  EXPECT_GT(checked, 8);
}

}  // namespace
}  // namespace dissipode
