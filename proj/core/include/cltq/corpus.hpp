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

#ifndef CLTQ_CORPUS_HPP_
#define CLTQ_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cltq {

enum class Label : std::uint8_t { kNegative = 0, kPositive = 1 };

std::string_view label_name(Label label);

struct TermCount {
  std::string term;
  std::uint32_t count = 0;

  friend bool operator==(const TermCount&, const TermCount&) = default;
};

// A bag of words. Terms are kept sorted by term string, which makes equality
// independent of the order in which the source line listed them.
class Document {
 public:
  Document() = default;

  // Throws cltq::Error on an empty term, a zero count or a duplicated term.
  Document(std::string id, std::vector<TermCount> terms);

  const std::string& id() const { return id_; }
  std::span<const TermCount> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // Count of `term`, 0 when absent.
  std::uint32_t count(std::string_view term) const;
  bool contains(std::string_view term) const { return count(term) > 0; }

  friend bool operator==(const Document&, const Document&) = default;

 private:
  std::string id_;
  std::vector<TermCount> terms_;
};

struct Corpus {
  std::string language;
  std::string domain;
  std::vector<Document> documents;
  // Present iff the corpus is labeled; then labels->size() == documents.size().
  std::optional<std::vector<Label>> labels;

  std::size_t size() const { return documents.size(); }
  bool labeled() const { return labels.has_value(); }
  std::size_t count(Label label) const;

  // Throws cltq::FormatError when an invariant is violated.
  void validate() const;
};

struct ParsedLine {
  Document document;
  std::optional<Label> label;
};

// Parses one line of the processed corpus layout:
//   token:count token:count ... [#label#:positive|negative]
// The count is whatever follows the last colon of a field, so tokens may
// contain colons themselves.
ParsedLine parse_processed_line(std::string_view line, std::size_t line_number = 0,
                                std::string id = {});

// Inverse of parse_processed_line (terms in sorted order, single spaces).
std::string serialize_processed_line(const Document& document, std::optional<Label> label);

// One document per line; the i-th document gets id "<i>" (1-based line number).
Corpus load_corpus(const std::filesystem::path& path, std::string language, std::string domain);
Corpus read_corpus(std::istream& in, std::string language, std::string domain);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

struct TermPair {
  std::string source;
  std::string target;

  friend bool operator==(const TermPair&, const TermPair&) = default;
};

// `source_term<TAB>target_term` per line.
std::vector<TermPair> load_dictionary(const std::filesystem::path& path);
std::vector<TermPair> read_dictionary(std::istream& in);
void write_dictionary(std::span<const TermPair> dictionary, const std::filesystem::path& path);
void write_dictionary(std::span<const TermPair> dictionary, std::ostream& out);

// A bilingual benchmark with known ground truth: both languages draw documents
// from the same two class-conditional multinomials; target terms are the
// source terms renamed s_i -> t_i.
struct SyntheticBilingual {
  Corpus source_labeled;
  Corpus source_unlabeled;
  Corpus target_unlabeled;
  Corpus target_test;
  std::vector<TermPair> dictionary;
};

// Shape of the generating distributions. The defaults give a task on which a
// bag-of-words classifier reaches roughly 80% accuracy.
struct SyntheticShape {
  double zipf_exponent = 1.0;
  double polar_fraction = 0.3;  // half positive-leaning, half negative-leaning
  double polarity_shift = 0.25;
  std::uint32_t min_length = 80;
  std::uint32_t max_length = 160;
};

// Sizes: n_labeled for the labeled source set and the labeled target test
// pool, n_unlabeled for each unlabeled set. Deterministic in `seed`.
SyntheticBilingual generate_synthetic_bilingual(std::uint64_t seed, std::size_t n_labeled,
                                                std::size_t n_unlabeled, std::size_t vocab_size,
                                                const SyntheticShape& shape = {});

}  // namespace cltq

#endif  // CLTQ_CORPUS_HPP_
