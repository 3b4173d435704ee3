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

#include <iosfwd>
#include <string>

#include "dissipode/block_system.hpp"

namespace dissipode {

/// "%%MatrixMarket matrix coordinate complex general", 1-based, nonzeros
/// only, values printed with 17 significant digits.
void write_matrix_market(std::ostream& out, const Matrix& m);
Matrix read_matrix_market(std::istream& in);

void write_matrix_market_file(const std::string& path, const Matrix& m);
Matrix read_matrix_market_file(const std::string& path);

/// Writes <base>.mtx (system), <base>_rhs.mtx (right-hand side as an n x 1
/// matrix) and <base>.json ({M, Mp, N, h, scheme}). The system matrix is
/// streamed block by block, so no dense guard applies.
void export_system(const AllAtOnceSystem& system, const std::string& base);

}  // namespace dissipode
