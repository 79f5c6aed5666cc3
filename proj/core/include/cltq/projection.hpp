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

#ifndef CLTQ_PROJECTION_HPP_
#define CLTQ_PROJECTION_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cltq/vectorizer.hpp"

namespace cltq {

enum class ProjectionMethod { kScl, kDci };

std::string_view projection_method_name(ProjectionMethod method);  // "scl" / "dci"
ProjectionMethod parse_projection_method(std::string_view name);

// |V| x L linear map; row i belongs to vocabulary index i of `language`.
struct ProjectionMatrix {
  Eigen::MatrixXd matrix;
  std::string language;
  ProjectionMethod method = ProjectionMethod::kDci;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

// One projection per language onto a shared L-dimensional space.
struct CrossLingualProjection {
  ProjectionMatrix source;
  ProjectionMatrix target;

  Eigen::Index dims() const { return source.cols(); }
};

// x^T theta. Throws cltq::Error when an index of x is out of range.
Eigen::VectorXd project(const SparseVector& x, const ProjectionMatrix& theta);

// Projects every vector; row r of the result is project(vectors[r], theta).
Eigen::MatrixXd project_all(std::span<const SparseVector> vectors, const ProjectionMatrix& theta);

// Mean of project(v, theta) over `vectors` (a zero vector when empty).
Eigen::RowVectorXd mean_projection(std::span<const SparseVector> vectors, const ProjectionMatrix& theta);

// Text dump: a header line `rows cols method language`, then one row per line
// with TAB-separated values printed with 17 significant digits (exact round trip).
void write_projection(const ProjectionMatrix& theta, std::ostream& out);
void write_projection(const ProjectionMatrix& theta, const std::filesystem::path& path);
ProjectionMatrix read_projection(std::istream& in);
ProjectionMatrix read_projection(const std::filesystem::path& path);

}  // namespace cltq

#endif  // CLTQ_PROJECTION_HPP_
