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

#include "cltq/vectorizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cltq/error.hpp"

namespace cltq {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
                       std::size_t n_docs)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), n_docs_(n_docs) {
  if (terms_.size() != doc_freq_.size()) throw Error("vocabulary: terms and doc_freq differ in size");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) throw Error("vocabulary: terms not strictly increasing");
    if (doc_freq_[i] < 1 || doc_freq_[i] > n_docs_) {
      throw Error("vocabulary: doc_freq of '" + terms_[i] + "' outside [1, n_docs]");
    }
  }
  rebuild_index();
}

Vocabulary::Vocabulary(const Vocabulary& other)
    : terms_(other.terms_), doc_freq_(other.doc_freq_), n_docs_(other.n_docs_) {
  rebuild_index();
}

Vocabulary& Vocabulary::operator=(const Vocabulary& other) {
  if (this != &other) {
    terms_ = other.terms_;
    doc_freq_ = other.doc_freq_;
    n_docs_ = other.n_docs_;
    rebuild_index();
  }
  return *this;
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector::SparseVector(std::vector<SparseEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0 && entries_[i].index <= entries_[i - 1].index) {
      throw Error("sparse vector: indices not strictly increasing");
    }
    if (entries_[i].value == 0.0) throw Error("sparse vector: stored zero");
    if (!std::isfinite(entries_[i].value)) throw Error("sparse vector: non-finite value");
  }
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * e.value;
  return std::sqrt(s);
}

double SparseVector::dot(const SparseVector& other) const {
  double s = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      s += a->value * b->value;
      ++a;
      ++b;
    }
  }
  return s;
}

std::unordered_map<std::string, std::uint32_t> document_frequencies(const Corpus& corpus) {
  std::unordered_map<std::string, std::uint32_t> df;
  for (const Document& doc : corpus.documents) {
    for (const TermCount& t : doc.terms()) ++df[t.term];
  }
  return df;
}

Vocabulary build_vocabulary(std::span<const Corpus* const> corpora, std::uint32_t min_df) {
  if (min_df < 1) throw Error("build_vocabulary: min_df must be >= 1");
  std::map<std::string, std::uint32_t> df;
  std::size_t n_docs = 0;
  for (const Corpus* corpus : corpora) {
    n_docs += corpus->size();
    for (const Document& doc : corpus->documents) {
      for (const TermCount& t : doc.terms()) ++df[t.term];
    }
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freqs;
  for (auto& [term, f] : df) {
    if (f >= min_df) {
      terms.push_back(term);
      freqs.push_back(f);
    }
  }
  if (terms.empty()) {
    throw Error("build_vocabulary: no term reaches min_df=" + std::to_string(min_df));
  }
  return Vocabulary(std::move(terms), std::move(freqs), n_docs);
}

Vocabulary build_vocabulary(std::initializer_list<const Corpus*> corpora, std::uint32_t min_df) {
  return build_vocabulary(std::span<const Corpus* const>(corpora.begin(), corpora.size()), min_df);
}

SparseVector tfidf_vectorize(const Document& document, const Vocabulary& vocab) {
  std::vector<SparseEntry> entries;
  entries.reserve(document.size());
  const double n = static_cast<double>(vocab.n_docs());
  for (const TermCount& t : document.terms()) {
    const auto index = vocab.index_of(t.term);
    if (!index) continue;
    const double tf = 1.0 + std::log(static_cast<double>(t.count));
    const double idf = std::log(n / static_cast<double>(vocab.doc_freq(*index)));
    const double w = tf * idf;
    if (w != 0.0) entries.push_back({*index, w});
  }
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  double norm = 0.0;
  for (const auto& e : entries) norm += e.value * e.value;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& e : entries) e.value /= norm;
  }
  return SparseVector(std::move(entries));
}

std::vector<SparseVector> tfidf_vectorize(const Corpus& corpus, const Vocabulary& vocab) {
  std::vector<SparseVector> out;
  out.reserve(corpus.size());
  for (const Document& doc : corpus.documents) out.push_back(tfidf_vectorize(doc, vocab));
  return out;
}

}  // namespace cltq
