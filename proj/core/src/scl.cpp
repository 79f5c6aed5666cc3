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

#include "cltq/scl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cltq/error.hpp"
#include "cltq/parallel.hpp"

namespace cltq::scl {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Binary document-term incidence in CSR layout over the concatenated space.
struct Incidence {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> columns;
  std::size_t n_cols = 0;

  std::size_t rows() const { return offsets.size() - 1; }
  std::span<const std::uint32_t> row(std::size_t r) const {
    return {columns.data() + offsets[r], offsets[r + 1] - offsets[r]};
  }
  bool contains(std::size_t r, std::uint32_t col) const {
    const auto cols = row(r);
    return std::binary_search(cols.begin(), cols.end(), col);
  }
};

void append_corpus(Incidence& inc, const Corpus& corpus, const Vocabulary& vocab, std::uint32_t offset) {
  std::vector<std::uint32_t> cols;
  for (const Document& doc : corpus.documents) {
    cols.clear();
    for (const TermCount& t : doc.terms()) {
      if (const auto index = vocab.index_of(t.term)) cols.push_back(*index + offset);
    }
    std::sort(cols.begin(), cols.end());
    inc.columns.insert(inc.columns.end(), cols.begin(), cols.end());
    inc.offsets.push_back(inc.columns.size());
  }
}

// Largest eigenvalue of [X 1]^T [X 1] by power iteration; X is nonnegative so
// the all-ones start overlaps the Perron vector.
double gram_spectral_norm(const Incidence& x) {
  const std::size_t d = x.n_cols + 1;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d)).normalized();
  Eigen::VectorXd xv(static_cast<Eigen::Index>(x.rows()));
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      double s = v(static_cast<Eigen::Index>(x.n_cols));
      for (std::uint32_t c : x.row(r)) s += v(c);
      xv(static_cast<Eigen::Index>(r)) = s;
    }
    Eigen::VectorXd next = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const double s = xv(static_cast<Eigen::Index>(r));
      for (std::uint32_t c : x.row(r)) next(c) += s;
      next(static_cast<Eigen::Index>(x.n_cols)) += s;
    }
    const double updated = next.norm();
    if (updated == 0.0) return 0.0;
    next /= updated;
    const bool done = std::abs(updated - lambda) <= 1e-10 * updated;
    lambda = updated;
    v = std::move(next);
    if (done) break;
  }
  // Power iteration approaches from below; the margin keeps 1/L a safe step.
  return lambda * 1.01;
}

// Modified Huber loss derivative with respect to the margin y*z.
inline double modified_huber_derivative(double margin) {
  if (margin >= 1.0) return 0.0;
  if (margin >= -1.0) return -2.0 * (1.0 - margin);
  return -4.0;
}

struct PivotColumns {
  std::uint32_t source;
  std::uint32_t target;
};

// Trains the predictors of pivots [begin, end) jointly; the problems are
// independent and only share the data pass.
void train_block(const Incidence& x, std::size_t n_source_docs, std::span<const PivotColumns> pivots,
                 std::size_t begin, std::size_t end, double step, const AuxiliaryOptions& options,
                 Eigen::MatrixXd& w_out) {
  const std::size_t n = x.rows();
  const auto b = static_cast<Eigen::Index>(end - begin);
  const auto dim = static_cast<Eigen::Index>(x.n_cols);

  RowMatrix y(static_cast<Eigen::Index>(n), b);
  std::vector<bool> trainable(static_cast<std::size_t>(b), false);
  for (Eigen::Index j = 0; j < b; ++j) {
    const PivotColumns& p = pivots[begin + static_cast<std::size_t>(j)];
    std::size_t positives = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const bool has = x.contains(r, r < n_source_docs ? p.source : p.target);
      y(static_cast<Eigen::Index>(r), j) = has ? 1.0 : -1.0;
      positives += has;
    }
    trainable[static_cast<std::size_t>(j)] = positives > 0 && positives < n;
  }

  RowMatrix w = RowMatrix::Zero(dim, b);
  RowMatrix w_prev = w;
  Eigen::RowVectorXd bias = Eigen::RowVectorXd::Zero(b);
  Eigen::RowVectorXd bias_prev = bias;
  RowMatrix look(dim, b);
  RowMatrix grad(dim, b);
  Eigen::RowVectorXd look_bias(b);
  Eigen::RowVectorXd grad_bias(b);
  Eigen::RowVectorXd z(b);
  const double inv_n = 1.0 / static_cast<double>(n);

  double t = 1.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = (t - 1.0) / t_next;
    look = w + momentum * (w - w_prev);
    look_bias = bias + momentum * (bias - bias_prev);

    grad.setZero();
    grad_bias.setZero();
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = x.row(r);
      z = look_bias;
      for (std::uint32_t c : row) z += look.row(c);
      const auto yr = y.row(static_cast<Eigen::Index>(r));
      for (Eigen::Index j = 0; j < b; ++j) {
        z(j) = yr(j) * modified_huber_derivative(yr(j) * z(j)) * inv_n;
      }
      for (std::uint32_t c : row) grad.row(c) += z;
      grad_bias += z;
    }
    grad += options.l2 * look;

    double worst = 0.0;
    for (Eigen::Index j = 0; j < b; ++j) {
      const PivotColumns& p = pivots[begin + static_cast<std::size_t>(j)];
      if (!trainable[static_cast<std::size_t>(j)]) {
        grad.col(j).setZero();
        grad_bias(j) = 0.0;
        continue;
      }
      grad(p.source, j) = 0.0;
      grad(p.target, j) = 0.0;
      worst = std::max(worst, std::sqrt(grad.col(j).squaredNorm() + grad_bias(j) * grad_bias(j)));
    }

    w_prev = std::move(w);
    bias_prev = bias;
    w = look - step * grad;
    bias = look_bias - step * grad_bias;
    t = t_next;
    if (worst <= options.tolerance) break;
  }

  for (Eigen::Index j = 0; j < b; ++j) {
    const auto col = static_cast<Eigen::Index>(begin) + j;
    if (!trainable[static_cast<std::size_t>(j)]) {
      w_out.col(col).setZero();
      continue;
    }
    w_out.col(col) = w.col(j);
    const PivotColumns& p = pivots[begin + static_cast<std::size_t>(j)];
    w_out(p.source, col) = 0.0;
    w_out(p.target, col) = 0.0;
  }
}

}  // namespace

Eigen::MatrixXd train_auxiliary_predictors(const Corpus& source_unlabeled, const Corpus& target_unlabeled,
                                           std::span<const PivotPair> pivots, const Vocabulary& source_vocab,
                                           const Vocabulary& target_vocab, const AuxiliaryOptions& options) {
  if (pivots.empty()) throw Error("scl: no pivots");
  if (source_unlabeled.size() == 0 || target_unlabeled.size() == 0) {
    throw Error("scl: unlabeled corpora must be non-empty");
  }
  const auto offset = static_cast<std::uint32_t>(source_vocab.size());

  std::vector<PivotColumns> columns;
  columns.reserve(pivots.size());
  for (const PivotPair& p : pivots) {
    const auto s = source_vocab.index_of(p.source_term);
    const auto t = target_vocab.index_of(p.target_term);
    if (!s) throw Error("scl: pivot '" + p.source_term + "' missing from the source vocabulary");
    if (!t) throw Error("scl: pivot '" + p.target_term + "' missing from the target vocabulary");
    columns.push_back({*s, *t + offset});
  }

  Incidence x;
  x.n_cols = source_vocab.size() + target_vocab.size();
  append_corpus(x, source_unlabeled, source_vocab, 0);
  append_corpus(x, target_unlabeled, target_vocab, offset);

  std::vector<std::size_t> df(x.n_cols, 0);
  for (std::uint32_t c : x.columns) ++df[c];
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (df[columns[j].source] == 0 && df[columns[j].target] == 0) {
      throw Error("scl: pivot pair (" + pivots[j].source_term + ", " + pivots[j].target_term +
                  ") occurs in neither unlabeled corpus");
    }
  }

  const double lipschitz = 2.0 * gram_spectral_norm(x) / static_cast<double>(x.rows()) + options.l2;
  const double step = 1.0 / lipschitz;

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.n_cols),
                                            static_cast<Eigen::Index>(columns.size()));
  const std::size_t block = std::max<std::size_t>(1, options.block_size);
  const std::size_t n_blocks = (columns.size() + block - 1) / block;
  parallel_for(n_blocks, options.jobs, [&](std::size_t blk) {
    const std::size_t begin = blk * block;
    const std::size_t end = std::min(columns.size(), begin + block);
    train_block(x, source_unlabeled.size(), columns, begin, end, step, options, w);
  });
  if (options.clip_negative) w = w.cwiseMax(0.0);
  return w;
}

ProjectionMatrix reduce(const Eigen::MatrixXd& w, Eigen::Index k, const SvdOptions& options) {
  TruncatedSvd svd = truncated_svd(w, k, options);
  ProjectionMatrix theta;
  theta.matrix = std::move(svd.left);
  theta.method = ProjectionMethod::kScl;
  theta.language = "source+target";
  return theta;
}

CrossLingualProjection build_projection(const Corpus& source_unlabeled, const Corpus& target_unlabeled,
                                        std::span<const PivotPair> pivots, const Vocabulary& source_vocab,
                                        const Vocabulary& target_vocab, const SclOptions& options) {
  const Eigen::MatrixXd w = train_auxiliary_predictors(source_unlabeled, target_unlabeled, pivots,
                                                       source_vocab, target_vocab, options.auxiliary);
  const ProjectionMatrix theta = reduce(w, options.dims, options.svd);
  const auto ns = static_cast<Eigen::Index>(source_vocab.size());
  const auto nt = static_cast<Eigen::Index>(target_vocab.size());
  CrossLingualProjection out;
  out.source = {theta.matrix.topRows(ns), source_unlabeled.language, ProjectionMethod::kScl};
  out.target = {theta.matrix.bottomRows(nt), target_unlabeled.language, ProjectionMethod::kScl};
  return out;
}

}  // namespace cltq::scl
