/*
 * Copyright 2026 The cltq Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cltq/projection.hpp"

#include <charconv>
#include <string>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cltq/error.hpp"

namespace cltq {

std::string_view projection_method_name(ProjectionMethod method) {
  return method == ProjectionMethod::kScl ? "scl" : "dci";
}

ProjectionMethod parse_projection_method(std::string_view name) {
  if (name == "scl") return ProjectionMethod::kScl;
  if (name == "dci") return ProjectionMethod::kDci;
  throw Error("unknown projection method '" + std::string(name) + "'");
}

Eigen::VectorXd project(const SparseVector& x, const ProjectionMatrix& theta) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(theta.cols());
  for (const SparseEntry& e : x.entries()) {
    if (e.index >= theta.rows()) {
      throw Error("project: index " + std::to_string(e.index) + " out of range for a projection with " +
                  std::to_string(theta.rows()) + " rows");
    }
    out.noalias() += e.value * theta.matrix.row(e.index).transpose();
  }
  return out;
}

Eigen::MatrixXd project_all(std::span<const SparseVector> vectors, const ProjectionMatrix& theta) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(vectors.size()), theta.cols());
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = project(vectors[r], theta).transpose();
  }
  return out;
}

Eigen::RowVectorXd mean_projection(std::span<const SparseVector> vectors, const ProjectionMatrix& theta) {
  // Projection is linear, so average the inputs first.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(theta.rows());
  for (const SparseVector& v : vectors) {
    for (const SparseEntry& e : v.entries()) {
      if (e.index >= static_cast<std::uint32_t>(theta.rows())) {
        throw Error("feature index " + std::to_string(e.index) + " outside a projection with " +
                    std::to_string(theta.rows()) + " rows");
      }
      mean(e.index) += e.value;
    }
  }
  if (!vectors.empty()) mean /= static_cast<double>(vectors.size());
  return mean.transpose() * theta.matrix;
}

void write_projection(const ProjectionMatrix& theta, std::ostream& out) {
  out << theta.rows() << ' ' << theta.cols() << ' ' << projection_method_name(theta.method) << ' '
      << theta.language << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < theta.rows(); ++r) {
    for (Eigen::Index c = 0; c < theta.cols(); ++c) {
      if (c > 0) out << '\t';
      std::snprintf(buf, sizeof buf, "%.17g", theta.matrix(r, c));
      out << buf;
    }
    out << '\n';
  }
}

void write_projection(const ProjectionMatrix& theta, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write projection file '" + path.string() + "'");
  write_projection(theta, out);
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

ProjectionMatrix read_projection(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "missing projection header");
  std::istringstream hs(header);
  long rows = -1;
  long cols = -1;
  std::string method;
  std::string language;
  if (!(hs >> rows >> cols >> method >> language) || rows < 0 || cols < 0) {
    throw ParseError(1, "header must be `rows cols method language`");
  }
  ProjectionMatrix theta;
  theta.method = parse_projection_method(method);
  theta.language = language;
  theta.matrix.resize(rows, cols);
  std::string line;
  for (long r = 0; r < rows; ++r) {
    const std::size_t line_number = static_cast<std::size_t>(r) + 2;
    if (!std::getline(in, line)) throw ParseError(line_number, "missing matrix row");
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (long c = 0; c < cols; ++c) {
      if (c > 0) {
        if (p == end || *p != '\t') throw ParseError(line_number, "expected TAB");
        ++p;
      }
      double v = 0.0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw ParseError(line_number, "malformed number");
      theta.matrix(r, c) = v;
      p = next;
    }
    if (p != end) throw ParseError(line_number, "trailing data after " + std::to_string(cols) + " columns");
  }
  return theta;
}

ProjectionMatrix read_projection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open projection file '" + path.string() + "'");
  return read_projection(in);
}

}  // namespace cltq
