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

#include "cltq/dci.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "cltq/error.hpp"

namespace cltq::dci {

SparseVector occurrence_vector(const Corpus& corpus, std::string_view term) {
  std::vector<SparseEntry> entries;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    if (corpus.documents[d].contains(term)) entries.push_back({static_cast<std::uint32_t>(d), 1.0});
  }
  return SparseVector(std::move(entries));
}

double dcf_cosine(const SparseVector& u, const SparseVector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

void postprocess_profiles(Eigen::MatrixXd& profiles) {
  for (Eigen::Index r = 0; r < profiles.rows(); ++r) {
    auto row = profiles.row(r);
    if ((row.array() == 0.0).all()) continue;
    row.array() -= row.mean();
    const double norm = row.norm();
    if (norm > 0.0) row /= norm;
  }
}

// With binary occurrence vectors, u.v is the co-occurrence count and |u|^2 the
// document frequency, so all cosines come from a single pass over the corpus.
ProjectionMatrix term_profiles(const Corpus& unlabeled, const Vocabulary& vocab,
                               std::span<const std::string> pivot_terms, const DciOptions& options) {
  if (pivot_terms.empty()) throw Error("dci: no pivots");
  const auto m = static_cast<Eigen::Index>(pivot_terms.size());
  std::unordered_map<std::string_view, std::vector<Eigen::Index>> slots;
  for (Eigen::Index j = 0; j < m; ++j) slots[pivot_terms[static_cast<std::size_t>(j)]].push_back(j);

  Eigen::MatrixXd co = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vocab.size()), m);
  std::vector<double> term_df(vocab.size(), 0.0);
  std::vector<double> pivot_df(static_cast<std::size_t>(m), 0.0);
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> present;
  for (const Document& doc : unlabeled.documents) {
    rows.clear();
    present.clear();
    for (const TermCount& t : doc.terms()) {
      if (const auto index = vocab.index_of(t.term)) rows.push_back(*index);
      if (const auto it = slots.find(t.term); it != slots.end()) {
        present.insert(present.end(), it->second.begin(), it->second.end());
      }
    }
    for (Eigen::Index j : present) pivot_df[static_cast<std::size_t>(j)] += 1.0;
    for (Eigen::Index r : rows) {
      term_df[static_cast<std::size_t>(r)] += 1.0;
      for (Eigen::Index j : present) co(r, j) += 1.0;
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (pivot_df[static_cast<std::size_t>(j)] == 0.0) {
      throw Error("dci: pivot '" + pivot_terms[static_cast<std::size_t>(j)] + "' never occurs in the " +
                  unlabeled.language + " unlabeled corpus");
    }
  }
  for (Eigen::Index r = 0; r < co.rows(); ++r) {
    const double df = term_df[static_cast<std::size_t>(r)];
    if (df == 0.0) continue;
    for (Eigen::Index j = 0; j < m; ++j) {
      co(r, j) = std::min(1.0, co(r, j) / std::sqrt(df * pivot_df[static_cast<std::size_t>(j)]));
    }
  }
  if (options.center_and_normalize) postprocess_profiles(co);

  ProjectionMatrix theta;
  theta.matrix = std::move(co);
  theta.language = unlabeled.language;
  theta.method = ProjectionMethod::kDci;
  return theta;
}

CrossLingualProjection build_projection(const Corpus& source_unlabeled, const Corpus& target_unlabeled,
                                        std::span<const PivotPair> pivots, const Vocabulary& source_vocab,
                                        const Vocabulary& target_vocab, const DciOptions& options) {
  std::vector<std::string> source_terms;
  std::vector<std::string> target_terms;
  for (const PivotPair& p : pivots) {
    source_terms.push_back(p.source_term);
    target_terms.push_back(p.target_term);
  }
  CrossLingualProjection out;
  out.source = term_profiles(source_unlabeled, source_vocab, source_terms, options);
  out.target = term_profiles(target_unlabeled, target_vocab, target_terms, options);
  return out;
}

}  // namespace cltq::dci
