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

#include "dissipode/ode_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "dissipode/error.hpp"

namespace dissipode {

// ---------------------------------------------------------------------------
// SampleGrid

SampleGrid::SampleGrid(std::vector<double> times, GridPurpose purpose)
    : times_(std::move(times)), purpose_(purpose) {
  if (times_.empty()) throw Error(ErrorCode::InvalidProblem, "sample grid is empty");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidProblem, "sample grid must be strictly increasing");
    }
  }
  if (times_.front() < 0.0) throw Error(ErrorCode::InvalidProblem, "sample grid starts before 0");
}

SampleGrid SampleGrid::uniform(double T, int points, GridPurpose purpose) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidProblem, "grid horizon must be positive");
  if (points < 2) throw Error(ErrorCode::InvalidProblem, "uniform grid needs at least 2 points");
  std::vector<double> times(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) times[i] = T * i / (points - 1);
  times.back() = T;
  return SampleGrid(std::move(times), purpose);
}

// ---------------------------------------------------------------------------
// DissipativeOdeProblem

namespace {

void check_square(const Matrix& a, Eigen::Index n) {
  if (a.rows() != n || a.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "A(t) is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    ", expected " + std::to_string(n) + "x" + std::to_string(n));
  }
}

double min_margin(const MatrixFn& a, Eigen::Index n, const std::vector<double>& times,
                  double* worst_time) {
  double eta = std::numeric_limits<double>::infinity();
  for (double t : times) {
    Matrix at = a(t);
    check_square(at, n);
    const double margin = -log_norm(at);
    if (margin < eta) {
      eta = margin;
      if (worst_time) *worst_time = t;
    }
  }
  return eta;
}

}  // namespace

DissipativeOdeProblem::DissipativeOdeProblem(Params p)
    : dim_(p.dim),
      A_(std::move(p.A)),
      b_(std::move(p.b)),
      u0_(std::move(p.u0)),
      T_(p.T),
      breakpoints_(std::move(p.breakpoints)),
      diagnostic_(p.diagnostic_nondissipative),
      label_(std::move(p.label)) {
  if (dim_ <= 0) throw Error(ErrorCode::InvalidProblem, "dimension must be positive");
  if (!A_) throw Error(ErrorCode::InvalidProblem, "generator A(t) is missing");
  if (!(T_ > 0.0) || !std::isfinite(T_)) {
    throw Error(ErrorCode::InvalidProblem, "horizon T must be positive and finite");
  }
  if (u0_.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "u0 has the wrong length");
  if (u0_.norm() == 0.0) throw Error(ErrorCode::InvalidProblem, "u0 must be nonzero");
  std::sort(breakpoints_.begin(), breakpoints_.end());

  const auto grid = SampleGrid::uniform(T_, p.certification_points);
  if (p.eta) {
    eta_ = *p.eta;
  } else {
    eta_ = min_margin(A_, dim_, grid.times(), nullptr);
    if (diagnostic_) eta_ = std::max(eta_, 0.0);
  }
  if (diagnostic_) {
    if (!(eta_ >= 0.0)) throw Error(ErrorCode::InvalidProblem, "eta must be nonnegative");
  } else if (!(eta_ > 0.0)) {
    throw Error(ErrorCode::InvalidProblem,
                "eta must be positive (measured or declared eta = " + std::to_string(eta_) + ")");
  }

  alpha_A_ = p.alpha_A ? *p.alpha_A : sampled_max_norm_A(*this, grid);
  if (!(alpha_A_ > 0.0)) {
    if (!diagnostic_) throw Error(ErrorCode::InvalidProblem, "alpha_A must be positive");
    // A == 0 in the diagnostic mode; any positive cap is valid.
    alpha_A_ = std::max(alpha_A_, 1.0);
  }
  alpha_b_ = p.alpha_b ? *p.alpha_b : (b_ ? sampled_max_norm_b(*this, grid) : 0.0);
  if (!(alpha_b_ >= 0.0)) throw Error(ErrorCode::InvalidProblem, "alpha_b must be nonnegative");
}

Matrix DissipativeOdeProblem::A(double t) const {
  Matrix a = A_(t);
  check_square(a, dim_);
  return a;
}

Vector DissipativeOdeProblem::b(double t) const {
  if (!b_) return Vector::Zero(dim_);
  Vector v = b_(t);
  if (v.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "b(t) has the wrong length");
  return v;
}

DissipativeOdeProblem DissipativeOdeProblem::with_horizon(double T) const {
  Params p;
  p.dim = dim_;
  p.A = A_;
  p.b = b_;
  p.u0 = u0_;
  p.T = T;
  p.eta = eta_;
  p.alpha_A = alpha_A_;
  p.alpha_b = alpha_b_;
  for (double t : breakpoints_) {
    if (t < T) p.breakpoints.push_back(t);
  }
  p.diagnostic_nondissipative = diagnostic_;
  p.label = label_;
  return DissipativeOdeProblem(std::move(p));
}

CertificateReport certify_dissipativity(const DissipativeOdeProblem& problem,
                                        const SampleGrid& grid) {
  CertificateReport report;
  report.measured_eta = min_margin([&](double t) { return problem.A(t); }, problem.dim(),
                                   grid.times(), &report.worst_time);
  report.pass = report.measured_eta >= problem.eta() - 1e-10 * problem.alpha_A();
  return report;
}

double sampled_max_norm_A(const DissipativeOdeProblem& problem, const SampleGrid& grid) {
  double m = 0.0;
  for (double t : grid.times()) m = std::max(m, spectral_norm(problem.A(t)));
  return m;
}

double sampled_max_norm_b(const DissipativeOdeProblem& problem, const SampleGrid& grid) {
  if (problem.homogeneous()) return 0.0;
  double m = 0.0;
  for (double t : grid.times()) m = std::max(m, problem.b(t).norm());
  return m;
}

// ---------------------------------------------------------------------------
// Heat equation

Matrix heat_laplacian_1d(int n_x) {
  if (n_x < 1) throw Error(ErrorCode::InvalidProblem, "n_x must be positive");
  const Eigen::Index n = n_x + 1;
  const double s = static_cast<double>(n_x) * n_x;
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    l(i, i) = -2.0 * s;
    if (i + 1 < n) {
      l(i, i + 1) = s;
      l(i + 1, i) = s;
    }
  }
  return l;
}

Matrix heat_divergence_1d(int n_x) {
  if (n_x < 1) throw Error(ErrorCode::InvalidProblem, "n_x must be positive");
  const Eigen::Index n = n_x + 1;
  const double s = 0.5 * n_x;
  Matrix dm = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    dm(i, i + 1) = s;
    dm(i + 1, i) = -s;
  }
  return dm;
}

Matrix kronecker_sum(const Matrix& op_1d, int d) {
  if (d < 1) throw Error(ErrorCode::InvalidProblem, "dimension d must be positive");
  const Eigen::Index n = op_1d.rows();
  Eigen::Index total = 1;
  for (int k = 0; k < d; ++k) total *= n;
  Matrix out = Matrix::Zero(total, total);
  for (int k = 0; k < d; ++k) {
    Matrix term = Matrix::Identity(1, 1);
    for (int j = 0; j < d; ++j) {
      term = kron(term, j == k ? op_1d : Matrix::Identity(n, n));
    }
    out += term;
  }
  return out;
}

std::vector<std::vector<double>> heat_grid_points(int d, int n_x) {
  const int n = n_x + 1;
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(n);
  std::vector<std::vector<double>> pts(total, std::vector<double>(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int k = d - 1; k >= 0; --k) {
      pts[idx][k] = static_cast<double>(rest % n) / n_x;
      rest /= n;
    }
  }
  return pts;
}

DissipativeOdeProblem make_heat_problem(const HeatParams& hp) {
  if (!(hp.a > 0.0)) throw Error(ErrorCode::InvalidProblem, "diffusivity a must be positive");
  if (hp.d < 1 || hp.n_x < 1) throw Error(ErrorCode::InvalidProblem, "d and n_x must be positive");
  double size = std::pow(hp.n_x + 1.0, hp.d);
  if (size > static_cast<double>(kDenseGuard)) {
    throw Error(ErrorCode::DimensionGuardExceeded,
                "(n_x+1)^d = " + std::to_string(static_cast<long long>(size)) +
                    " exceeds the dense guard " + std::to_string(kDenseGuard));
  }
  const auto points = heat_grid_points(hp.d, hp.n_x);
  const auto n = static_cast<Eigen::Index>(points.size());
  const Matrix lap = kronecker_sum(heat_laplacian_1d(hp.n_x), hp.d);
  const Matrix div = kronecker_sum(heat_divergence_1d(hp.n_x), hp.d);
  const Matrix base = hp.a * lap + hp.b_vel * div;

  const auto grid = SampleGrid::uniform(hp.T, hp.certification_points);
  double sup_c = 0.0;
  if (hp.c) {
    for (double t : grid.times()) {
      for (const auto& x : points) {
        const double cv = hp.c(t, x);
        if (cv > 0.0) {
          throw Error(ErrorCode::NonpositivityViolation,
                      "potential c(t,x) = " + std::to_string(cv) + " > 0 at t = " +
                          std::to_string(t));
        }
        sup_c = std::max(sup_c, -cv);
      }
    }
  }

  DissipativeOdeProblem::Params p;
  p.dim = n;
  auto c = hp.c;
  p.A = [base, c, points](double t) {
    Matrix a = base;
    if (c) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += c(t, points[i]);
      }
    }
    return a;
  };
  double alpha_b = 0.0;
  if (hp.f) {
    auto f = hp.f;
    p.b = [f, points](double t) {
      Vector v(static_cast<Eigen::Index>(points.size()));
      for (std::size_t i = 0; i < points.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = f(t, points[i]);
      }
      return v;
    };
    for (double t : grid.times()) alpha_b = std::max(alpha_b, p.b(t).norm());
  }
  p.u0 = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& x = points[static_cast<std::size_t>(i)];
    if (hp.u0) {
      p.u0(i) = hp.u0(x);
    } else {
      double v = 1.0;
      for (double xi : x) v *= std::sin(std::numbers::pi * (xi * hp.n_x + 1.0) / (hp.n_x + 2.0));
      p.u0(i) = v;
    }
  }
  p.T = hp.T;
  const double nx2 = static_cast<double>(hp.n_x) * hp.n_x;
  p.eta = 4.0 * hp.a * hp.d * nx2 / ((hp.n_x + 2.0) * (hp.n_x + 2.0));
  p.alpha_A = hp.a * spectral_norm(lap) + std::abs(hp.b_vel) * spectral_norm(div) + sup_c;
  p.alpha_b = alpha_b;
  p.certification_points = hp.certification_points;
  p.label = "heat";
  return DissipativeOdeProblem(std::move(p));
}

// ---------------------------------------------------------------------------
// Non-Hermitian dynamics

DissipativeOdeProblem make_non_hermitian_problem(MatrixFn H, MatrixFn L, Vector u0, double T,
                                                 std::optional<double> eta,
                                                 int certification_points) {
  if (!H || !L) throw Error(ErrorCode::InvalidProblem, "H(t) and L(t) are required");
  const Eigen::Index n = u0.size();
  const auto grid = SampleGrid::uniform(T, certification_points);
  double margin = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double t : grid.times()) {
    Matrix lt = L(t);
    check_square(lt, n);
    check_square(H(t), n);
    const double m = -max_eigenvalue_hermitian(hermitian_part(lt));
    if (m < margin) {
      margin = m;
      worst = t;
    }
  }
  const double target = eta.value_or(margin);
  if (!(margin > 0.0) || margin < target - 1e-12 * std::max(1.0, target)) {
    throw Error(ErrorCode::NotNegativeDefinite,
                "lambda_max(L(t)) = " + std::to_string(-margin) + " at t = " +
                    std::to_string(worst) + " exceeds -eta = " + std::to_string(-target));
  }
  DissipativeOdeProblem::Params p;
  p.dim = n;
  p.A = [H = std::move(H), L = std::move(L)](double t) -> Matrix { return -kI * H(t) + L(t); };
  p.u0 = std::move(u0);
  p.T = T;
  p.eta = target;
  p.certification_points = certification_points;
  p.label = "non_hermitian";
  return DissipativeOdeProblem(std::move(p));
}

// ---------------------------------------------------------------------------
// Piecewise constant

DissipativeOdeProblem make_piecewise_problem(const PiecewiseData& data) {
  const std::size_t pieces = data.A.size();
  if (pieces == 0) throw Error(ErrorCode::InvalidProblem, "at least one A block is required");
  if (data.times.size() != pieces) {
    throw Error(ErrorCode::InvalidProblem, "times and A lists must have equal length");
  }
  if (!data.b.empty() && data.b.size() != pieces) {
    throw Error(ErrorCode::InvalidProblem, "b list must be empty or match the A list");
  }
  if (data.times.front() != 0.0) throw Error(ErrorCode::InvalidProblem, "times must start at 0");
  for (std::size_t k = 1; k < pieces; ++k) {
    if (!(data.times[k] > data.times[k - 1])) {
      throw Error(ErrorCode::InvalidProblem, "times must be strictly increasing");
    }
  }
  const Eigen::Index n = data.u0.size();
  double eta = std::numeric_limits<double>::infinity();
  double alpha_a = 0.0;
  double alpha_b = 0.0;
  for (std::size_t k = 0; k < pieces; ++k) {
    check_square(data.A[k], n);
    eta = std::min(eta, -log_norm(data.A[k]));
    alpha_a = std::max(alpha_a, spectral_norm(data.A[k]));
    if (!data.b.empty()) {
      if (data.b[k].size() != n) throw Error(ErrorCode::DimensionMismatch, "b block length");
      alpha_b = std::max(alpha_b, data.b[k].norm());
    }
  }

  auto times = data.times;
  auto piece = [times](double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - times.begin()) - 1));
  };
  DissipativeOdeProblem::Params p;
  p.dim = n;
  p.A = [blocks = data.A, piece](double t) { return blocks[piece(t)]; };
  if (!data.b.empty()) {
    p.b = [blocks = data.b, piece](double t) { return blocks[piece(t)]; };
  }
  p.u0 = data.u0;
  p.T = data.T;
  p.eta = data.eta ? *data.eta : (data.diagnostic_nondissipative ? std::max(eta, 0.0) : eta);
  p.alpha_A = data.alpha_A.value_or(alpha_a);
  p.alpha_b = data.alpha_b.value_or(alpha_b);
  for (std::size_t k = 1; k < pieces; ++k) {
    if (data.times[k] < data.T) p.breakpoints.push_back(data.times[k]);
  }
  p.diagnostic_nondissipative = data.diagnostic_nondissipative;
  p.label = "custom_matrix_list";
  return DissipativeOdeProblem(std::move(p));
}

DissipativeOdeProblem make_constant_problem(const Matrix& A, const Vector& u0, double T,
                                            std::optional<Vector> b, std::optional<double> eta) {
  PiecewiseData data;
  data.times = {0.0};
  data.A = {A};
  if (b) data.b = {*b};
  data.u0 = u0;
  data.T = T;
  data.eta = eta;
  if (eta && *eta == 0.0) data.diagnostic_nondissipative = true;
  return make_piecewise_problem(data);
}

}  // namespace dissipode
