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

#include "cltq/svd.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "cltq/error.hpp"
#include "cltq/random.hpp"

namespace cltq {
namespace {

// Orthonormal basis (thin Q) for the columns of `a`.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

void fix_signs(Eigen::MatrixXd& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Eigen::Index arg = 0;
    if (u.col(c).cwiseAbs().maxCoeff(&arg) > 0.0 && u(arg, c) < 0.0) u.col(c) *= -1.0;
  }
}

}  // namespace

TruncatedSvd truncated_svd(const Eigen::MatrixXd& w, Eigen::Index k, const SvdOptions& options) {
  const Eigen::Index m = w.rows();
  const Eigen::Index n = w.cols();
  if (k < 0 || k > std::min(m, n)) {
    throw Error("truncated_svd: k=" + std::to_string(k) + " exceeds min(rows, cols)=" +
                std::to_string(std::min(m, n)));
  }
  TruncatedSvd out;
  out.left = Eigen::MatrixXd::Zero(m, k);
  out.singular_values = Eigen::VectorXd::Zero(k);
  if (k == 0) {
    out.converged = true;
    return out;
  }

  const Eigen::Index oversampling = options.oversampling < 0 ? 2 * k : options.oversampling;
  const Eigen::Index block = std::min(std::min(m, n), k + oversampling);

  Rng rng(options.seed);
  Eigen::MatrixXd omega(n, block);
  for (Eigen::Index c = 0; c < block; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) omega(r, c) = rng.uniform(-1.0, 1.0);
  }
  Eigen::MatrixXd q = orthonormalize(w * omega);

  Eigen::MatrixXd u_prev;
  Eigen::VectorXd s_prev;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd u;
  for (int it = 1; it <= std::max(1, options.max_iterations); ++it) {
    q = orthonormalize(w * orthonormalize(w.transpose() * q));

    const Eigen::MatrixXd b = q.transpose() * w;
    Eigen::BDCSVD<Eigen::MatrixXd> small(b, Eigen::ComputeThinU);
    u = q * small.matrixU().leftCols(k);
    sigma = small.singularValues().head(k);
    fix_signs(u);
    out.iterations = it;

    if (it > 1) {
      const double scale = std::max(sigma(0), std::numeric_limits<double>::min());
      const double value_change = (sigma - s_prev).cwiseAbs().maxCoeff() / scale;
      double vector_change = 0.0;
      for (Eigen::Index c = 0; c < k; ++c) {
        // Vectors of (numerically) zero singular values are arbitrary.
        if (sigma(c) <= 1e-12 * scale) continue;
        vector_change = std::max(vector_change, (u.col(c) - u_prev.col(c)).cwiseAbs().maxCoeff());
      }
      if (value_change <= options.tolerance && vector_change <= options.tolerance) {
        out.converged = true;
        break;
      }
    }
    u_prev = u;
    s_prev = sigma;
  }

  const double rank_tol = static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon() *
                          (sigma.size() > 0 ? sigma(0) : 0.0);
  for (Eigen::Index c = 0; c < k; ++c) {
    if (sigma(c) > rank_tol && sigma(c) > 0.0) {
      out.left.col(c) = u.col(c);
      out.singular_values(c) = sigma(c);
      ++out.rank;
    }
  }
  if (out.rank < k) {
    out.warnings.push_back("truncated_svd: k=" + std::to_string(k) + " exceeds the numerical rank " +
                           std::to_string(out.rank) + "; padding with zero columns");
    std::clog << "warning: " << out.warnings.back() << '\n';
  }
  if (!out.converged) {
    out.warnings.push_back("truncated_svd: no convergence within " + std::to_string(options.max_iterations) +
                           " iterations");
  }
  return out;
}

}  // namespace cltq
