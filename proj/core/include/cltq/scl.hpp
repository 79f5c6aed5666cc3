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

#ifndef CLTQ_SCL_HPP_
#define CLTQ_SCL_HPP_

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "cltq/corpus.hpp"
#include "cltq/pivots.hpp"
#include "cltq/projection.hpp"
#include "cltq/svd.hpp"
#include "cltq/vectorizer.hpp"

namespace cltq::scl {

// Pivot-presence predictors: L2-regularized modified Huber loss on binary
// term-presence features, minimized by full-batch Nesterov gradient descent.
struct AuxiliaryOptions {
  double l2 = 1e-4;
  int max_iterations = 100;
  double tolerance = 1e-6;  // per-column gradient norm
  bool clip_negative = true;
  std::size_t block_size = 64;  // pivots trained together
  std::size_t jobs = 1;
};

// Returns W with |V_s| + |V_t| rows (source indices first, target indices
// offset by |V_s|) and one column per pivot. Documents of both unlabeled
// corpora are training examples; the label of a document is whether it
// contains the pivot term of its own language, and both pivot terms are
// masked out of the inputs. Single-class tasks give a zero column.
// Throws cltq::Error when a pivot occurs in neither unlabeled corpus.
Eigen::MatrixXd train_auxiliary_predictors(const Corpus& source_unlabeled, const Corpus& target_unlabeled,
                                           std::span<const PivotPair> pivots, const Vocabulary& source_vocab,
                                           const Vocabulary& target_vocab,
                                           const AuxiliaryOptions& options = {});

// theta = top-k left singular vectors of W, zero-padded past the rank of W.
ProjectionMatrix reduce(const Eigen::MatrixXd& w, Eigen::Index k, const SvdOptions& options = {});

struct SclOptions {
  AuxiliaryOptions auxiliary;
  Eigen::Index dims = 100;
  SvdOptions svd;
};

// Full SCL: auxiliary predictors, SVD, then theta split into its source and
// target row blocks.
CrossLingualProjection build_projection(const Corpus& source_unlabeled, const Corpus& target_unlabeled,
                                        std::span<const PivotPair> pivots, const Vocabulary& source_vocab,
                                        const Vocabulary& target_vocab, const SclOptions& options = {});

}  // namespace cltq::scl

#endif  // CLTQ_SCL_HPP_
