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

#include <string>

#include "json.hpp"

#include "dissipode/ode_model.hpp"

namespace dissipode {

// Problem documents:
//
//   {"kind": "custom_matrix_list", "times": [0, 0.5], "A": [M0, M1],
//    "b": [v0, v1], "u0": v, "T": 1, "eta"?, "alpha_A"?, "alpha_b"?,
//    "diagnostic"?}
//   {"kind": "heat", "a", "b_vel", "d", "n_x", "c", "f", "T"}
//   {"kind": "non_hermitian", "H": M, "H_t"?: M, "L": M, "u0": v, "T", "eta"?}
//
// Matrices are lists of rows. A complex entry is a number, a [re, im] pair
// or {"re": x, "im": y}. For the heat kind, c and f are constants. For the
// non-Hermitian kind H(t) = H + t * H_t.

DissipativeOdeProblem problem_from_json(const nlohmann::json& doc);
DissipativeOdeProblem load_problem_file(const std::string& path);

cplx complex_from_json(const nlohmann::json& v);
Vector vector_from_json(const nlohmann::json& v);
Matrix matrix_from_json(const nlohmann::json& v);
nlohmann::json complex_to_json(cplx z);
nlohmann::json vector_to_json(const Vector& v);

/// Summary used in reports.
nlohmann::json problem_summary(const DissipativeOdeProblem& problem);

}  // namespace dissipode
