/*
 Copyright 2026 The schwarz-ocp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/lq.hpp"

namespace schwarz_ocp {

namespace {

using nlohmann::json;

Matrix read_matrix(const json& obj, const char* key, int rows, int cols) {
  if (!obj.contains(key)) return Matrix::Zero(rows, cols);
  const json& a = obj.at(key);
  if (!a.is_array() || static_cast<int>(a.size()) != rows) {
    throw StructuralError(std::string("matrix '") + key + "' must have " +
                          std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = a[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw StructuralError(std::string("matrix '") + key + "' row " +
                            std::to_string(i) + " must have " +
                            std::to_string(cols) + " entries");
    }
    for (int j = 0; j < cols; ++j) m(i, j) = row[j].get<double>();
  }
  return m;
}

Vector read_vector(const json& obj, const char* key, int n) {
  if (!obj.contains(key)) return Vector::Zero(n);
  const json& a = obj.at(key);
  if (!a.is_array() || static_cast<int>(a.size()) != n) {
    throw StructuralError(std::string("vector '") + key + "' must have " +
                          std::to_string(n) + " entries");
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = a[i].get<double>();
  return v;
}

json write_matrix(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

json write_vector(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

LqProblem parse_lq_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed LQ file: ") + e.what());
  }
  try {
    const int N = doc.at("N").get<int>();
    const int nx = doc.at("nx").get<int>();
    const int nu = doc.at("nu").get<int>();
    LqProblem p(N, nx, nu);
    const json stages = doc.value("stages", json::array());
    if (!stages.is_array() || static_cast<int>(stages.size()) != N) {
      throw StructuralError("LQ file must list exactly N stages");
    }
    for (int k = 0; k < N; ++k) {
      const json& s = stages[k];
      LqStage& st = p.stages[k];
      st.Q = read_matrix(s, "Q", nx, nx);
      st.S = read_matrix(s, "S", nu, nx);
      st.R = read_matrix(s, "R", nu, nu);
      st.A = read_matrix(s, "A", nx, nx);
      st.B = read_matrix(s, "B", nx, nu);
      st.v = read_vector(s, "v", nx);
      st.r = read_vector(s, "r", nx);
      st.s = read_vector(s, "s", nu);
    }
    p.QN = read_matrix(doc, "QN", nx, nx);
    p.rN = read_vector(doc, "rN", nx);
    p.x0 = read_vector(doc, "x0", nx);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("invalid LQ file: ") + e.what());
  }
}

LqProblem read_lq_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open LQ file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lq_problem(buf.str());
}

std::string to_json(const LqProblem& p) {
  p.validate();
  if (p.nd > 0) throw StructuralError("data-coupling blocks are not serialized");
  json doc;
  doc["N"] = p.horizon;
  doc["nx"] = p.nx;
  doc["nu"] = p.nu;
  json stages = json::array();
  for (const LqStage& st : p.stages) {
    stages.push_back({{"Q", write_matrix(st.Q)},
                      {"S", write_matrix(st.S)},
                      {"R", write_matrix(st.R)},
                      {"A", write_matrix(st.A)},
                      {"B", write_matrix(st.B)},
                      {"v", write_vector(st.v)},
                      {"r", write_vector(st.r)},
                      {"s", write_vector(st.s)}});
  }
  doc["stages"] = stages;
  doc["QN"] = write_matrix(p.QN);
  doc["rN"] = write_vector(p.rN);
  doc["x0"] = write_vector(p.x0);
  return doc.dump(1);
}

}  // namespace schwarz_ocp
