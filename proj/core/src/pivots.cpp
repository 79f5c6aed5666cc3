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

#include "cltq/pivots.hpp"

#include <algorithm>
#include <cmath>

#include "cltq/vectorizer.hpp"

namespace cltq {

TranslationOracle::TranslationOracle(const std::vector<TermPair>& dictionary, std::size_t budget)
    : budget_(budget) {
  dictionary_.reserve(dictionary.size());
  for (const TermPair& p : dictionary) {
    if (!dictionary_.emplace(p.source, p.target).second) {
      throw Error("dictionary lists source term '" + p.source + "' more than once");
    }
  }
}

std::optional<std::string> TranslationOracle::translate(std::string_view source_term) {
  if (exhausted()) {
    throw OracleBudgetExhausted("translation oracle budget of " + std::to_string(budget_) +
                                " calls exhausted");
  }
  ++calls_used_;
  const auto it = dictionary_.find(std::string(source_term));
  if (it == dictionary_.end()) return std::nullopt;
  return it->second;
}

double mutual_information(const Contingency& table) {
  const double n = static_cast<double>(table.total());
  if (n == 0.0) return 0.0;
  const double present = static_cast<double>(table.term_positive + table.term_negative) / n;
  const double positive = static_cast<double>(table.term_positive + table.absent_positive) / n;
  auto cell = [&](std::size_t count, double p_term, double p_class) {
    if (count == 0) return 0.0;
    const double p = static_cast<double>(count) / n;
    return p * std::log2(p / (p_term * p_class));
  };
  const double mi = cell(table.term_positive, present, positive) +
                    cell(table.term_negative, present, 1.0 - positive) +
                    cell(table.absent_positive, 1.0 - present, positive) +
                    cell(table.absent_negative, 1.0 - present, 1.0 - positive);
  return std::max(0.0, mi);
}

double mutual_information(std::string_view term, const Corpus& labeled) {
  if (!labeled.labeled()) throw Error("mutual_information: corpus is unlabeled");
  if (labeled.size() == 0) throw Error("mutual_information: corpus is empty");
  Contingency table;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const bool present = labeled.documents[i].contains(term);
    const bool positive = (*labeled.labels)[i] == Label::kPositive;
    if (present) {
      ++(positive ? table.term_positive : table.term_negative);
    } else {
      ++(positive ? table.absent_positive : table.absent_negative);
    }
  }
  return mutual_information(table);
}

bool passes_drift_test(double source_rate, double target_rate, double threshold) {
  const double hi = std::max(source_rate, target_rate);
  if (hi <= 0.0) return threshold <= 0.0;
  return std::min(source_rate, target_rate) / hi >= threshold;
}

std::vector<PivotPair> select_pivots(const Corpus& source_labeled, const Corpus& source_unlabeled,
                                     const Corpus& target_unlabeled, TranslationOracle& oracle,
                                     const PivotOptions& options) {
  if (options.m < 1) throw Error("select_pivots: m must be >= 1");
  if (options.phi < 1) throw Error("select_pivots: phi must be >= 1");
  if (!(options.drift_threshold >= 0.0 && options.drift_threshold <= 1.0)) {
    throw Error("select_pivots: drift_threshold must lie in [0, 1]");
  }
  if (!source_labeled.labeled() || source_labeled.size() == 0) {
    throw Error("select_pivots: source training corpus must be labeled and non-empty");
  }
  if (source_unlabeled.size() == 0 || target_unlabeled.size() == 0) {
    throw Error("select_pivots: unlabeled corpora must be non-empty");
  }

  const auto df_source = document_frequencies(source_unlabeled);
  const auto df_target = document_frequencies(target_unlabeled);

  // Per-class document counts of every term in the labeled source set.
  struct ClassCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;
  };
  std::unordered_map<std::string_view, ClassCounts> class_counts;
  const std::size_t n_pos = source_labeled.count(Label::kPositive);
  const std::size_t n_neg = source_labeled.size() - n_pos;
  for (std::size_t i = 0; i < source_labeled.size(); ++i) {
    const bool positive = (*source_labeled.labels)[i] == Label::kPositive;
    for (const TermCount& t : source_labeled.documents[i].terms()) {
      auto& c = class_counts[t.term];
      ++(positive ? c.positive : c.negative);
    }
  }

  struct Candidate {
    std::string_view term;
    double mi;
    std::uint32_t df;
  };
  std::vector<Candidate> candidates;
  for (const auto& [term, df] : df_source) {
    if (df < options.phi) continue;
    Contingency table{0, 0, n_pos, n_neg};
    if (const auto it = class_counts.find(term); it != class_counts.end()) {
      table = {it->second.positive, it->second.negative, n_pos - it->second.positive,
               n_neg - it->second.negative};
    }
    candidates.push_back({term, mutual_information(table), df});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.mi != b.mi) return a.mi > b.mi;
    return a.term < b.term;
  });

  const double n_source = static_cast<double>(source_unlabeled.size());
  const double n_target = static_cast<double>(target_unlabeled.size());
  std::vector<PivotPair> pivots;
  for (const Candidate& c : candidates) {
    if (pivots.size() == options.m) break;
    if (oracle.exhausted()) {
      throw PivotSelectionError("oracle budget of " + std::to_string(oracle.budget()) +
                                    " calls exhausted after finding " + std::to_string(pivots.size()) +
                                    " of " + std::to_string(options.m) + " pivots",
                                std::move(pivots));
    }
    const auto translation = oracle.translate(c.term);
    if (!translation) continue;
    const auto it = df_target.find(*translation);
    if (it == df_target.end() || it->second < options.phi) continue;
    const double f_s = static_cast<double>(c.df) / n_source;
    const double f_t = static_cast<double>(it->second) / n_target;
    if (!passes_drift_test(f_s, f_t, options.drift_threshold)) continue;
    pivots.push_back({std::string(c.term), *translation, c.mi});
  }
  if (pivots.size() < options.m) {
    throw PivotSelectionError("only " + std::to_string(pivots.size()) + " of " +
                                  std::to_string(options.m) + " requested pivots passed all filters",
                              std::move(pivots));
  }
  return pivots;
}

}  // namespace cltq
