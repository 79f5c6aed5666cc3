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

#ifndef CLTQ_PIVOTS_HPP_
#define CLTQ_PIVOTS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cltq/corpus.hpp"
#include "cltq/error.hpp"

namespace cltq {

// A word translation dictionary that may only be consulted `budget` times.
class TranslationOracle {
 public:
  // Throws cltq::Error on a source term listed twice.
  TranslationOracle(const std::vector<TermPair>& dictionary, std::size_t budget);

  // Consumes one call. Throws OracleBudgetExhausted when no calls are left.
  std::optional<std::string> translate(std::string_view source_term);

  std::size_t budget() const { return budget_; }
  std::size_t calls_used() const { return calls_used_; }
  bool exhausted() const { return calls_used_ >= budget_; }

 private:
  std::unordered_map<std::string, std::string> dictionary_;
  std::size_t budget_;
  std::size_t calls_used_ = 0;
};

class OracleBudgetExhausted : public Error {
 public:
  using Error::Error;
};

struct PivotPair {
  std::string source_term;
  std::string target_term;
  double mi_score = 0.0;  // bits

  friend bool operator==(const PivotPair&, const PivotPair&) = default;
};

// Raised when fewer than m pivots could be selected; carries what was found.
class PivotSelectionError : public Error {
 public:
  PivotSelectionError(const std::string& message, std::vector<PivotPair> found)
      : Error(message), found_(std::move(found)) {}

  const std::vector<PivotPair>& found() const { return found_; }

 private:
  std::vector<PivotPair> found_;
};

// 2x2 table of (term present?) x (class) document counts.
struct Contingency {
  std::size_t term_positive = 0;
  std::size_t term_negative = 0;
  std::size_t absent_positive = 0;
  std::size_t absent_negative = 0;

  std::size_t total() const { return term_positive + term_negative + absent_positive + absent_negative; }
};

// Mutual information in bits; empty cells contribute nothing.
double mutual_information(const Contingency& table);

// MI between "term occurs in the document" and the document label.
// Throws cltq::Error when the corpus is unlabeled or empty.
double mutual_information(std::string_view term, const Corpus& labeled);

struct PivotOptions {
  std::size_t m = 450;
  std::size_t phi = 30;  // minimum document frequency in each unlabeled corpus
  // Minimum min/max ratio of the document-frequency rates of a pair in the two
  // unlabeled corpora. 0 disables the drift filter.
  double drift_threshold = 0.5;
};

// Ranks source terms with df >= phi in source_unlabeled by MI with the label
// of source_labeled (ties lexicographic), asks the oracle for a translation of
// each in turn, and keeps the pair when the translation has df >= phi in
// target_unlabeled and passes the drift test. Stops at m pivots.
// Throws PivotSelectionError if the budget or the candidate list runs out first.
std::vector<PivotPair> select_pivots(const Corpus& source_labeled, const Corpus& source_unlabeled,
                                     const Corpus& target_unlabeled, TranslationOracle& oracle,
                                     const PivotOptions& options);

// The drift filter on its own: min(f_s, f_t) / max(f_s, f_t) >= threshold.
bool passes_drift_test(double source_rate, double target_rate, double threshold);

}  // namespace cltq

#endif  // CLTQ_PIVOTS_HPP_
