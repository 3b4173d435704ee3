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

#include <vector>

#include "dissipode/linalg.hpp"

namespace dissipode {

/// Per-step vectors u_0 .. u_{M+Mp-1}. The history view is the first M + 1
/// blocks; the final view is block M.
struct SolutionBundle {
  std::vector<Vector> blocks;
  std::vector<double> norms;
  double h = 0.0;
  int M = 0;
  int Mp = 1;
  double residual = 0.0;  // relative residual of the all-at-once solve, 0 for oracles

  /// Fills `norms` from `blocks`.
  void refresh_norms();
  /// Concatenation of u_0 .. u_M.
  Vector history_vector() const;
  const Vector& final_state() const { return blocks.at(static_cast<std::size_t>(M)); }
  /// Concatenation of every block.
  Vector stacked() const;
};

}  // namespace dissipode
