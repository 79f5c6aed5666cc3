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

#ifndef CLTQ_SVD_HPP_
#define CLTQ_SVD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cltq {

struct SvdOptions {
  // Extra block columns beyond k; negative means 2k.
  Eigen::Index oversampling = -1;
  int max_iterations = 50;
  // Stop once both the top-k singular values (relative to the largest) and the
  // top-k left singular vectors (max abs entry) change by less than this.
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eed5eedULL;
};

struct TruncatedSvd {
  // rows(W) x k. Columns past the numerical rank are zero.
  Eigen::MatrixXd left;
  Eigen::VectorXd singular_values;
  Eigen::Index rank = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Top-k left singular vectors of `w` by randomized block power (subspace)
// iteration with QR re-orthonormalization and a Rayleigh-Ritz step. Each
// column's sign is fixed so that its largest-magnitude entry is positive.
// Throws cltq::Error when k > min(rows, cols). When k exceeds the numerical
// rank the missing columns are zero and a warning is recorded (and logged).
TruncatedSvd truncated_svd(const Eigen::MatrixXd& w, Eigen::Index k, const SvdOptions& options = {});

}  // namespace cltq

#endif  // CLTQ_SVD_HPP_
