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

#ifndef CLTQ_DCI_HPP_
#define CLTQ_DCI_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "cltq/corpus.hpp"
#include "cltq/pivots.hpp"
#include "cltq/projection.hpp"
#include "cltq/vectorizer.hpp"

namespace cltq::dci {

// Binary document-incidence vector of `term` over `corpus` (index = document).
SparseVector occurrence_vector(const Corpus& corpus, std::string_view term);

// Distributional correspondence function: cosine of two occurrence vectors,
// 0 when either is zero.
double dcf_cosine(const SparseVector& u, const SparseVector& v);

struct DciOptions {
  // Subtract each profile's mean, then scale it to unit L2 norm.
  bool center_and_normalize = true;
};

// One row per vocabulary term: the cosine DCF between the term and each
// pivot over `unlabeled`. Terms absent from the corpus get zero rows.
// Throws cltq::Error when a pivot never occurs in the corpus.
ProjectionMatrix term_profiles(const Corpus& unlabeled, const Vocabulary& vocab,
                               std::span<const std::string> pivot_terms, const DciOptions& options = {});

// Mean-centers and L2-normalizes every row in place; zero rows stay zero.
void postprocess_profiles(Eigen::MatrixXd& profiles);

CrossLingualProjection build_projection(const Corpus& source_unlabeled, const Corpus& target_unlabeled,
                                        std::span<const PivotPair> pivots, const Vocabulary& source_vocab,
                                        const Vocabulary& target_vocab, const DciOptions& options = {});

}  // namespace cltq::dci

#endif  // CLTQ_DCI_HPP_
