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

#include "dissipode/matrix_market.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "dissipode/error.hpp"

namespace dissipode {

namespace {

constexpr const char* kBanner = "%%MatrixMarket matrix coordinate complex general";

struct Entry {
  Eigen::Index i, j;
  cplx v;
};

void write_entries(std::ostream& out, Eigen::Index rows, Eigen::Index cols,
                   const std::vector<Entry>& entries) {
  out << kBanner << '\n' << rows << ' ' << cols << ' ' << entries.size() << '\n';
  out << std::setprecision(17);
  for (const auto& e : entries) {
    out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.v.real() << ' ' << e.v.imag() << '\n';
  }
}

void append_block(std::vector<Entry>& entries, const Matrix& b, Eigen::Index r0, Eigen::Index c0,
                  double sign) {
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      if (b(i, j) != cplx(0.0)) entries.push_back({r0 + i, c0 + j, sign * b(i, j)});
    }
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_matrix_market(std::ostream& out, const Matrix& m) {
  std::vector<Entry> entries;
  append_block(entries, m, 0, 0, 1.0);
  write_entries(out, m.rows(), m.cols(), entries);
}

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw Error(ErrorCode::ParseError, "missing MatrixMarket banner");
  }
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || symmetry != "general" ||
      (field != "complex" && field != "real")) {
    throw Error(ErrorCode::ParseError, "unsupported MatrixMarket header: " + line);
  }
  const bool is_complex = field == "complex";
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream size(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(size >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
    throw Error(ErrorCode::ParseError, "bad MatrixMarket size line");
  }
  Matrix m = Matrix::Zero(rows, cols);
  for (long k = 0; k < nnz; ++k) {
    long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(in >> i >> j >> re) || (is_complex && !(in >> im))) {
      throw Error(ErrorCode::ParseError, "truncated MatrixMarket entries");
    }
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw Error(ErrorCode::ParseError, "MatrixMarket entry out of range");
    }
    m(i - 1, j - 1) += cplx(re, im);
  }
  return m;
}

void write_matrix_market_file(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  write_matrix_market(out, m);
}

Matrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_matrix_market(in);
}

void export_system(const AllAtOnceSystem& s, const std::string& base) {
  std::vector<Entry> entries;
  const Eigen::Index n = s.N;
  for (int k = 0; k < s.block_rows(); ++k) {
    append_block(entries, s.diag_blocks[static_cast<std::size_t>(k)], k * n, k * n, 1.0);
    if (k > 0) {
      append_block(entries, s.sub_blocks[static_cast<std::size_t>(k - 1)], k * n, (k - 1) * n, -1.0);
    }
  }
  {
    auto out = open_out(base + ".mtx");
    write_entries(out, s.dimension(), s.dimension(), entries);
  }
  {
    std::vector<Entry> rhs;
    for (int k = 0; k < s.block_rows(); ++k) {
      append_block(rhs, Matrix(s.rhs_blocks[static_cast<std::size_t>(k)]), k * n, 0, 1.0);
    }
    auto out = open_out(base + "_rhs.mtx");
    write_entries(out, s.dimension(), 1, rhs);
  }
  auto out = open_out(base + ".json");
  nlohmann::json side{{"M", s.M}, {"Mp", s.Mp}, {"N", s.N}, {"h", s.h}, {"scheme", s.scheme.name()}};
  if (s.scheme.is_dyson()) {
    side["K"] = s.scheme.dyson_order;
    side["quad_nodes"] = s.scheme.quad_nodes;
  }
  out << side.dump(2) << '\n';
}

}  // namespace dissipode
