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

#include "dissipode/solution.hpp"

#include "dissipode/error.hpp"

namespace dissipode {

void SolutionBundle::refresh_norms() {
  norms.resize(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) norms[k] = blocks[k].norm();
}

Vector SolutionBundle::history_vector() const {
  if (blocks.size() < static_cast<std::size_t>(M) + 1) {
    throw Error(ErrorCode::ShapeMismatch, "solution has fewer than M+1 blocks");
  }
  const Eigen::Index n = blocks.front().size();
  Vector v(n * (M + 1));
  for (int k = 0; k <= M; ++k) v.segment(k * n, n) = blocks[static_cast<std::size_t>(k)];
  return v;
}

Vector SolutionBundle::stacked() const {
  if (blocks.empty()) return Vector();
  const Eigen::Index n = blocks.front().size();
  Vector v(n * static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    v.segment(static_cast<Eigen::Index>(k) * n, n) = blocks[k];
  }
  return v;
}

}  // namespace dissipode
