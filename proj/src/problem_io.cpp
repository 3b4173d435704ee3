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

#include "dissipode/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "dissipode/error.hpp"

namespace dissipode {

using nlohmann::json;

namespace {

std::optional<double> opt_number(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<double>();
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing key '") + key + "'");
  return doc.at(key);
}

DissipativeOdeProblem custom_from_json(const json& doc) {
  PiecewiseData d;
  const json& a = require(doc, "A");
  if (!a.is_array() || a.empty()) throw Error(ErrorCode::ParseError, "'A' must be a nonempty list");
  for (const auto& m : a) d.A.push_back(matrix_from_json(m));
  if (doc.contains("times")) {
    d.times = doc.at("times").get<std::vector<double>>();
  } else if (d.A.size() == 1) {
    d.times = {0.0};
  } else {
    throw Error(ErrorCode::ParseError, "'times' is required for more than one A block");
  }
  if (doc.contains("b") && !doc.at("b").is_null()) {
    for (const auto& v : doc.at("b")) d.b.push_back(vector_from_json(v));
  }
  d.u0 = vector_from_json(require(doc, "u0"));
  d.T = require(doc, "T").get<double>();
  d.eta = opt_number(doc, "eta");
  d.alpha_A = opt_number(doc, "alpha_A");
  d.alpha_b = opt_number(doc, "alpha_b");
  d.diagnostic_nondissipative = doc.value("diagnostic", false);
  return make_piecewise_problem(d);
}

DissipativeOdeProblem heat_from_json(const json& doc) {
  HeatParams hp;
  hp.a = doc.value("a", 1.0);
  hp.b_vel = doc.value("b_vel", 0.0);
  hp.d = doc.value("d", 1);
  hp.n_x = doc.value("n_x", 4);
  hp.T = doc.value("T", 1.0);
  const double c = doc.value("c", 0.0);
  const double f = doc.value("f", 0.0);
  if (c != 0.0) hp.c = [c](double, std::span<const double>) { return c; };
  if (f != 0.0) hp.f = [f](double, std::span<const double>) { return f; };
  return make_heat_problem(hp);
}

DissipativeOdeProblem non_hermitian_from_json(const json& doc) {
  const Matrix h0 = matrix_from_json(require(doc, "H"));
  const Matrix l = matrix_from_json(require(doc, "L"));
  Matrix h1 = Matrix::Zero(h0.rows(), h0.cols());
  if (doc.contains("H_t")) h1 = matrix_from_json(doc.at("H_t"));
  return make_non_hermitian_problem([h0, h1](double t) -> Matrix { return h0 + t * h1; },
                                    [l](double) { return l; }, vector_from_json(require(doc, "u0")),
                                    require(doc, "T").get<double>(), opt_number(doc, "eta"));
}

}  // namespace

cplx complex_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object()) return {v.value("re", 0.0), v.value("im", 0.0)};
  throw Error(ErrorCode::ParseError, "cannot read complex number from " + v.dump());
}

Vector vector_from_json(const json& v) {
  if (!v.is_array()) throw Error(ErrorCode::ParseError, "vector must be a list");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = complex_from_json(v[i]);
  return out;
}

Matrix matrix_from_json(const json& v) {
  if (!v.is_array() || v.empty()) throw Error(ErrorCode::ParseError, "matrix must be a list of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::ParseError, "matrix rows must have equal length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_from_json(row[static_cast<std::size_t>(j)]);
  }
  return m;
}

json complex_to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

DissipativeOdeProblem problem_from_json(const json& doc) {
  try {
    const std::string kind = require(doc, "kind").get<std::string>();
    if (kind == "custom_matrix_list") return custom_from_json(doc);
    if (kind == "heat") return heat_from_json(doc);
    if (kind == "non_hermitian") return non_hermitian_from_json(doc);
    throw Error(ErrorCode::ParseError, "unknown problem kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

DissipativeOdeProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open problem file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
  return problem_from_json(doc);
}

json problem_summary(const DissipativeOdeProblem& p) {
  return json{{"kind", p.label()},          {"dim", p.dim()},
              {"T", p.horizon()},           {"eta", p.eta()},
              {"alpha_A", p.alpha_A()},     {"alpha_b", p.alpha_b()},
              {"homogeneous", p.homogeneous()}, {"diagnostic", p.diagnostic()}};
}

}  // namespace dissipode
