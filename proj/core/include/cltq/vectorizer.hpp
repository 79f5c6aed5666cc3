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

#ifndef CLTQ_VECTORIZER_HPP_
#define CLTQ_VECTORIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cltq/corpus.hpp"

namespace cltq {

// Term -> dense index map plus the document frequencies it was fitted on.
// Indices follow lexicographic term order.
class Vocabulary {
 public:
  Vocabulary() = default;

  // `terms` must be strictly increasing; 1 <= doc_freq[i] <= n_docs.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq, std::size_t n_docs);

  // The index holds views into terms_, so copies rebuild it. Moves keep the
  // string buffers in place.
  Vocabulary(const Vocabulary& other);
  Vocabulary& operator=(const Vocabulary& other);
  Vocabulary(Vocabulary&&) noexcept = default;
  Vocabulary& operator=(Vocabulary&&) noexcept = default;

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::string& term(std::size_t index) const { return terms_[index]; }
  std::uint32_t doc_freq(std::size_t index) const { return doc_freq_[index]; }
  std::span<const std::string> terms() const { return terms_; }

  std::optional<std::uint32_t> index_of(std::string_view term) const;

 private:
  void rebuild_index();

  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_freq_;
  std::size_t n_docs_ = 0;
  std::unordered_map<std::string_view, std::uint32_t> index_;
};

struct SparseEntry {
  std::uint32_t index;
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Sparse real vector with strictly increasing indices and no stored zeros.
class SparseVector {
 public:
  SparseVector() = default;

  // Throws cltq::Error if the entries break the invariants above or a value is not finite.
  explicit SparseVector(std::vector<SparseEntry> entries);

  std::span<const SparseEntry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double norm() const;
  double dot(const SparseVector& other) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<SparseEntry> entries_;
};

// Number of documents containing each term.
std::unordered_map<std::string, std::uint32_t> document_frequencies(const Corpus& corpus);

// Every term occurring in at least `min_df` documents of the given corpora.
// Throws cltq::Error when min_df == 0 or the result is empty.
Vocabulary build_vocabulary(std::span<const Corpus* const> corpora, std::uint32_t min_df);
Vocabulary build_vocabulary(std::initializer_list<const Corpus*> corpora, std::uint32_t min_df);

// (1 + ln tf) * ln(N / df) for in-vocabulary terms, then L2-normalized.
// Documents with no in-vocabulary term map to the zero vector.
SparseVector tfidf_vectorize(const Document& document, const Vocabulary& vocab);

std::vector<SparseVector> tfidf_vectorize(const Corpus& corpus, const Vocabulary& vocab);

}  // namespace cltq

#endif  // CLTQ_VECTORIZER_HPP_
