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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dissipode/linalg.hpp"

namespace dissipode {

using MatrixFn = std::function<Matrix(double)>;
using VectorFn = std::function<Vector(double)>;

enum class GridPurpose { Certification, Quadrature };

/// Strictly increasing sample times in [0, T]. Certification grids always
/// contain both endpoints.
class SampleGrid {
 public:
  SampleGrid(std::vector<double> times, GridPurpose purpose);

  static SampleGrid uniform(double T, int points = 129,
                            GridPurpose purpose = GridPurpose::Certification);

  const std::vector<double>& times() const noexcept { return times_; }
  GridPurpose purpose() const noexcept { return purpose_; }

 private:
  std::vector<double> times_;
  GridPurpose purpose_;
};

/// u'(t) = A(t) u(t) + b(t), u(0) = u0, t in [0, T], with
/// (A + A^dagger)/2 <= -eta.
///
/// eta, alpha_A and alpha_b may be left empty in Params; they are then
/// measured on a uniform certification grid (see DESIGN notes in README).
/// `breakpoints` lists interior times where A or b jump; the reference
/// integrator never steps across them.
///
/// A diagnostic problem is allowed to have eta == 0. It exists only as a
/// non-dissipative control group for condition-number experiments.
class DissipativeOdeProblem {
 public:
  struct Params {
    Eigen::Index dim = 0;
    MatrixFn A;
    VectorFn b;  // empty means b == 0
    Vector u0;
    double T = 1.0;
    std::optional<double> eta;
    std::optional<double> alpha_A;
    std::optional<double> alpha_b;
    std::vector<double> breakpoints;
    bool diagnostic_nondissipative = false;
    int certification_points = 129;
    std::string label;
  };

  explicit DissipativeOdeProblem(Params params);

  Eigen::Index dim() const noexcept { return dim_; }
  Matrix A(double t) const;
  Vector b(double t) const;
  const Vector& u0() const noexcept { return u0_; }
  double horizon() const noexcept { return T_; }
  double eta() const noexcept { return eta_; }
  double alpha_A() const noexcept { return alpha_A_; }
  double alpha_b() const noexcept { return alpha_b_; }
  bool homogeneous() const noexcept { return !b_; }
  bool diagnostic() const noexcept { return diagnostic_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::string& label() const noexcept { return label_; }

  /// Same generator and data on a different horizon. eta and the norm caps
  /// are kept; A and b must be defined on the new interval.
  DissipativeOdeProblem with_horizon(double T) const;

 private:
  Eigen::Index dim_;
  MatrixFn A_;
  VectorFn b_;
  Vector u0_;
  double T_;
  double eta_;
  double alpha_A_;
  double alpha_b_;
  std::vector<double> breakpoints_;
  bool diagnostic_;
  std::string label_;
};

struct CertificateReport {
  double measured_eta = 0.0;
  double worst_time = 0.0;
  bool pass = false;
};

/// measured_eta = min over the grid of -lambda_max((A + A^dagger)/2).
CertificateReport certify_dissipativity(const DissipativeOdeProblem& problem,
                                        const SampleGrid& grid);

/// Max over the grid of ||A(t)|| and ||b(t)||.
double sampled_max_norm_A(const DissipativeOdeProblem& problem, const SampleGrid& grid);
double sampled_max_norm_b(const DissipativeOdeProblem& problem, const SampleGrid& grid);

// ---------------------------------------------------------------------------
// Heat equation on [0,1]^d, central differences, method of lines.

using SpaceTimeField = std::function<double(double t, std::span<const double> x)>;
using SpaceField = std::function<double(std::span<const double> x)>;

struct HeatParams {
  double a = 1.0;      // diffusivity
  double b_vel = 0.0;  // flow velocity
  int d = 1;
  int n_x = 4;
  SpaceTimeField c;    // potential, must be <= 0; empty means 0
  SpaceTimeField f;    // source; empty means 0
  SpaceField u0;       // initial data; empty means a smooth bump
  double T = 1.0;
  int certification_points = 129;
};

/// Second-difference matrix n_x^2 * tridiag(1, -2, 1) of size n_x + 1.
Matrix heat_laplacian_1d(int n_x);
/// Centered difference (n_x / 2) * tridiag(-1, 0, 1) of size n_x + 1.
Matrix heat_divergence_1d(int n_x);
/// Kronecker sum of the 1-D operator over d axes.
Matrix kronecker_sum(const Matrix& op_1d, int d);
/// Grid point coordinates x_j = (j_1/n_x, ..., j_d/n_x); axis 1 varies slowest.
std::vector<std::vector<double>> heat_grid_points(int d, int n_x);

/// Semi-discretized heat equation A(t) = a L + b_vel D + C(t).
///
/// Unknowns sit at all (n_x + 1)^d points j/n_x, 0 <= j <= n_x, exactly as
/// the L_1 stencil is printed: the Dirichlet condition is imposed implicitly
/// through the truncated stencil rather than by removing the two boundary
/// points, so each axis carries n_x + 1 unknowns and L_1 has eigenvalues
/// -4 n_x^2 sin^2(j pi / (2 (n_x + 2))), j = 1..n_x+1.
///
/// eta = 4 a d n_x^2 / (n_x + 2)^2; alpha_A = a ||L|| + |b_vel| ||D|| + sup |c|.
DissipativeOdeProblem make_heat_problem(const HeatParams& params);

/// A(t) = -i H(t) + L(t), b = 0. eta defaults to the smallest margin
/// min_t -lambda_max(L(t)) on the certification grid.
DissipativeOdeProblem make_non_hermitian_problem(MatrixFn H, MatrixFn L, Vector u0, double T,
                                                 std::optional<double> eta = std::nullopt,
                                                 int certification_points = 129);

/// Piecewise-constant A and b: A(t) = A_k for t in [times_k, times_{k+1}).
struct PiecewiseData {
  std::vector<double> times;
  std::vector<Matrix> A;
  std::vector<Vector> b;  // empty or same length as A
  Vector u0;
  double T = 1.0;
  std::optional<double> eta;
  std::optional<double> alpha_A;
  std::optional<double> alpha_b;
  bool diagnostic_nondissipative = false;
};

DissipativeOdeProblem make_piecewise_problem(const PiecewiseData& data);

/// Constant generator and source; the common scalar test problem.
DissipativeOdeProblem make_constant_problem(const Matrix& A, const Vector& u0, double T,
                                            std::optional<Vector> b = std::nullopt,
                                            std::optional<double> eta = std::nullopt);

}  // namespace dissipode
