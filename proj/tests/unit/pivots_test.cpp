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

#include <gtest/gtest.h>

#include <algorithm>

#include "cltq/corpus.hpp"
#include "cltq/pivots.hpp"

namespace cltq {
namespace {

// Labeled corpus from (terms, label) rows.
Corpus labeled_corpus(const std::vector<std::pair<std::vector<std::string>, Label>>& rows) {
  Corpus c;
  c.language = "src";
  c.domain = "test";
  std::vector<Label> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<TermCount> terms;
    for (const auto& t : rows[i].first) terms.push_back({t, 1});
    c.documents.emplace_back(std::to_string(i), terms);
    labels.push_back(rows[i].second);
  }
  c.labels = labels;
  return c;
}

// Unlabeled corpus where term `terms[j]` occurs in the first `df[j]` of `n` documents.
Corpus unlabeled_corpus(const std::string& language, std::size_t n, const std::vector<std::string>& terms,
                        const std::vector<std::size_t>& df) {
  Corpus c;
  c.language = language;
  c.domain = "test";
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<TermCount> t{{"filler", 1}};
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (i < df[j]) t.push_back({terms[j], 1});
    }
    c.documents.emplace_back(std::to_string(i), t);
  }
  return c;
}

TEST(MutualInformation, PerfectlyInformativeTermIsOneBit) {
  EXPECT_NEAR(mutual_information(Contingency{50, 0, 0, 50}), 1.0, 1e-12);
}

TEST(MutualInformation, IndependentTermIsZero) {
  EXPECT_NEAR(mutual_information(Contingency{25, 25, 25, 25}), 0.0, 1e-12);
}

TEST(MutualInformation, ReferenceTable) {
  // Four-cell sum evaluated independently: 0.2564258916820028 bits.
  const double mi = mutual_information(Contingency{30, 10, 10, 50});
  EXPECT_NEAR(mi, 0.2564258916820028, 1e-12);
  EXPECT_NEAR(mi, 0.2565, 1e-4);
}

TEST(MutualInformation, SymmetricUnderJointRelabeling) {
  // Swap classes and complement presence at the same time.
  EXPECT_NEAR(mutual_information(Contingency{30, 10, 10, 50}), mutual_information(Contingency{50, 10, 10, 30}),
              1e-12);
  EXPECT_NEAR(mutual_information(Contingency{7, 3, 1, 9}), mutual_information(Contingency{9, 1, 3, 7}), 1e-12);
}

TEST(MutualInformation, FromCorpus) {
  const Corpus c = labeled_corpus({{{"good"}, Label::kPositive},
                                   {{"good"}, Label::kPositive},
                                   {{"bad"}, Label::kNegative},
                                   {{"bad"}, Label::kNegative}});
  EXPECT_NEAR(mutual_information("good", c), 1.0, 1e-12);
  EXPECT_NEAR(mutual_information("absent", c), 0.0, 1e-12);
  Corpus unlabeled = c;
  unlabeled.labels.reset();
  EXPECT_THROW(mutual_information("good", unlabeled), Error);
}

TEST(DriftTest, RatioRule) {
  EXPECT_FALSE(passes_drift_test(0.10, 0.02, 0.25));  // 0.2 < 0.25
  EXPECT_TRUE(passes_drift_test(0.10, 0.05, 0.5));
  EXPECT_TRUE(passes_drift_test(0.02, 0.10, 0.15));
  EXPECT_TRUE(passes_drift_test(0.10, 0.001, 0.0));
}

TEST(TranslationOracle, ChargesEveryCall) {
  TranslationOracle oracle({{"a", "x"}}, 2);
  EXPECT_EQ(oracle.translate("a").value(), "x");
  EXPECT_FALSE(oracle.translate("zzz").has_value());
  EXPECT_EQ(oracle.calls_used(), 2u);
  EXPECT_TRUE(oracle.exhausted());
  EXPECT_THROW(oracle.translate("a"), OracleBudgetExhausted);
  EXPECT_EQ(oracle.calls_used(), 2u);
}

TEST(TranslationOracle, RejectsDuplicateSourceTerms) {
  EXPECT_THROW(TranslationOracle({{"a", "x"}, {"a", "y"}}, 5), Error);
}

// Six terms with decreasing class association; "p0" is perfectly predictive.
struct PivotFixture {
  Corpus labeled;
  Corpus source;
  Corpus target;
  std::vector<TermPair> dictionary;

  PivotFixture() {
    std::vector<std::pair<std::vector<std::string>, Label>> rows;
    for (int i = 0; i < 20; ++i) {
      const bool pos = i < 10;
      std::vector<std::string> t;
      if (pos) t.push_back("p0");
      if (pos ? i < 9 : i >= 19) t.push_back("p1");
      if (pos ? i < 8 : i >= 18) t.push_back("p2");
      if (pos ? i < 7 : i >= 17) t.push_back("p3");
      if (pos ? i < 6 : i >= 16) t.push_back("p4");
      t.push_back("common");
      rows.push_back({t, pos ? Label::kPositive : Label::kNegative});
    }
    labeled = labeled_corpus(rows);
    const std::vector<std::string> s{"p0", "p1", "p2", "p3", "p4", "common"};
    source = unlabeled_corpus("src", 100, s, {40, 40, 40, 40, 40, 90});
    const std::vector<std::string> t{"q0", "q1", "q2", "q3", "q4", "qcommon"};
    // q2 drifts (40 vs 10 documents); q4 is too rare on the target side.
    target = unlabeled_corpus("tgt", 100, t, {40, 40, 10, 40, 5, 90});
    for (std::size_t j = 0; j < s.size(); ++j) dictionary.push_back({s[j], t[j]});
  }
};

TEST(SelectPivots, VacuousFiltersReturnTopMiTermsInOrder) {
  PivotFixture f;
  TranslationOracle oracle(f.dictionary, 100);
  const auto pivots = select_pivots(f.labeled, f.source, f.target, oracle, {3, 1, 0.0});
  ASSERT_EQ(pivots.size(), 3u);
  EXPECT_EQ(pivots[0].source_term, "p0");
  EXPECT_EQ(pivots[1].source_term, "p1");
  EXPECT_EQ(pivots[2].source_term, "p2");
  EXPECT_EQ(pivots[2].target_term, "q2");
  EXPECT_EQ(oracle.calls_used(), 3u);
  EXPECT_NEAR(pivots[0].mi_score, 1.0, 1e-12);
}

TEST(SelectPivots, SupportAndDriftFilters) {
  PivotFixture f;
  TranslationOracle oracle(f.dictionary, 100);
  const auto pivots = select_pivots(f.labeled, f.source, f.target, oracle, {3, 20, 0.5});
  ASSERT_EQ(pivots.size(), 3u);
  EXPECT_EQ(pivots[0].source_term, "p0");
  EXPECT_EQ(pivots[1].source_term, "p1");
  EXPECT_EQ(pivots[2].source_term, "p3");  // p2 drifts
  EXPECT_EQ(oracle.calls_used(), 4u);
  for (std::size_t i = 1; i < pivots.size(); ++i) EXPECT_GE(pivots[i - 1].mi_score, pivots[i].mi_score);
}

TEST(SelectPivots, BudgetExhaustedReportsFoundPivots) {
  PivotFixture f;
  TranslationOracle oracle(f.dictionary, 2);  // m - 1 calls, all candidates valid
  try {
    select_pivots(f.labeled, f.source, f.target, oracle, {3, 1, 0.0});
    FAIL();
  } catch (const PivotSelectionError& e) {
    EXPECT_EQ(e.found().size(), 2u);
    EXPECT_EQ(oracle.calls_used(), 2u);
  }
}

TEST(SelectPivots, TooFewValidCandidatesIsAnError) {
  PivotFixture f;
  TranslationOracle oracle(f.dictionary, 100);
  try {
    select_pivots(f.labeled, f.source, f.target, oracle, {5, 20, 0.5});
    FAIL();
  } catch (const PivotSelectionError& e) {
    // p0, p1, p3 and common survive; p2 drifts and p4 lacks target support.
    EXPECT_EQ(e.found().size(), 4u);
    EXPECT_LE(oracle.calls_used(), oracle.budget());
  }
}

TEST(SelectPivots, MissingTranslationIsSkipped) {
  PivotFixture f;
  f.dictionary.erase(f.dictionary.begin() + 1);  // no entry for p1
  TranslationOracle oracle(f.dictionary, 100);
  const auto pivots = select_pivots(f.labeled, f.source, f.target, oracle, {2, 1, 0.0});
  EXPECT_EQ(pivots[1].source_term, "p2");
  EXPECT_EQ(oracle.calls_used(), 3u);
}

TEST(SelectPivots, IdentityDictionaryOnSyntheticDataMatchesMiRanking) {
  const auto d = generate_synthetic_bilingual(5, 400, 400, 60);
  TranslationOracle oracle(d.dictionary, 1000);
  const auto pivots = select_pivots(d.source_labeled, d.source_unlabeled, d.target_unlabeled, oracle, {10, 1, 0.0});
  ASSERT_EQ(pivots.size(), 10u);
  // Brute-force ranking of all source terms by MI.
  std::vector<std::pair<double, std::string>> ranked;
  for (const TermPair& p : d.dictionary) {
    bool seen = false;
    for (const Document& doc : d.source_unlabeled.documents) seen = seen || doc.contains(p.source);
    if (seen) ranked.push_back({-mutual_information(p.source, d.source_labeled), p.source});
  }
  std::sort(ranked.begin(), ranked.end());
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(pivots[i].source_term, ranked[i].second);
    EXPECT_EQ(pivots[i].target_term, "t_" + pivots[i].source_term.substr(2));
  }
}

}  // namespace
}  // namespace cltq
