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

#include <Eigen/Dense>

#include "cltq/corpus.hpp"
#include "cltq/dci.hpp"
#include "cltq/error.hpp"
#include "cltq/vectorizer.hpp"

namespace cltq {
namespace {

SparseVector binary(std::initializer_list<std::uint32_t> idx) {
  std::vector<SparseEntry> e;
  for (auto i : idx) e.push_back({i, 1.0});
  return SparseVector(e);
}

Corpus small_corpus(const std::vector<std::vector<std::string>>& docs) {
  Corpus c;
  c.language = "en";
  c.domain = "test";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<TermCount> t;
    for (const auto& s : docs[i]) t.push_back({s, 2});
    c.documents.emplace_back(std::to_string(i), t);
  }
  return c;
}

TEST(DcfCosine, Examples) {
  EXPECT_DOUBLE_EQ(dci::dcf_cosine(binary({0, 2, 5}), binary({0, 2, 5})), 1.0);
  EXPECT_DOUBLE_EQ(dci::dcf_cosine(binary({0, 1}), binary({2, 3})), 0.0);
  EXPECT_DOUBLE_EQ(dci::dcf_cosine(binary({0, 2}), binary({0, 1})), 0.5);
  EXPECT_DOUBLE_EQ(dci::dcf_cosine(SparseVector(), binary({1})), 0.0);
}

TEST(OccurrenceVector, IsBinaryIncidence) {
  const Corpus c = small_corpus({{"a", "b"}, {"b"}, {"a"}, {"c"}});
  EXPECT_EQ(dci::occurrence_vector(c, "a"), binary({0, 2}));
  EXPECT_EQ(dci::occurrence_vector(c, "b"), binary({0, 1}));
  EXPECT_TRUE(dci::occurrence_vector(c, "zzz").empty());
}

TEST(TermProfiles, RawCosines) {
  const Corpus c = small_corpus({{"a", "b"}, {"b"}, {"a"}, {"c"}});
  const Vocabulary v = build_vocabulary({&c}, 1);
  const std::vector<std::string> pivots{"a", "b"};
  const ProjectionMatrix p = dci::term_profiles(c, v, pivots, {.center_and_normalize = false});
  ASSERT_EQ(p.rows(), 3);
  ASSERT_EQ(p.cols(), 2);
  const auto a = *v.index_of("a");
  const auto b = *v.index_of("b");
  const auto cc = *v.index_of("c");
  EXPECT_DOUBLE_EQ(p.matrix(a, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.matrix(b, 1), 1.0);
  EXPECT_DOUBLE_EQ(p.matrix(a, 1), 0.5);
  EXPECT_DOUBLE_EQ(p.matrix(cc, 0), 0.0);
  EXPECT_EQ(p.language, "en");
  EXPECT_EQ(p.method, ProjectionMethod::kDci);
  const ProjectionMatrix post = dci::term_profiles(c, v, pivots);
  EXPECT_TRUE(p.matrix.row(cc).isZero(0.0));
  EXPECT_TRUE(post.matrix.row(cc).isZero(0.0));
}

TEST(TermProfiles, PostprocessedRowsAreCenteredUnitVectors) {
  const auto d = generate_synthetic_bilingual(3, 200, 500, 200);
  const Vocabulary v = build_vocabulary({&d.source_unlabeled}, 1);
  std::vector<std::string> pivots;
  for (int i = 0; i < 20; ++i) pivots.push_back("s_" + std::to_string(i));
  const ProjectionMatrix p = dci::term_profiles(d.source_unlabeled, v, pivots);
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    if (p.matrix.row(r).isZero(0.0)) continue;
    EXPECT_NEAR(p.matrix.row(r).mean(), 0.0, 1e-12);
    EXPECT_NEAR(p.matrix.row(r).norm(), 1.0, 1e-12);
  }
}

TEST(PostprocessProfiles, ZeroAndConstantRowsStayZero) {
  Eigen::MatrixXd m(3, 3);
  m << 0, 0, 0, 0.5, 0.5, 0.5, 1, 2, 3;
  dci::postprocess_profiles(m);
  EXPECT_TRUE(m.row(0).isZero(0.0));
  EXPECT_TRUE(m.row(1).isZero(1e-15));
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(m(2, 0), -s, 1e-15);
  EXPECT_NEAR(m(2, 1), 0.0, 1e-15);
  EXPECT_NEAR(m(2, 2), s, 1e-15);
}

TEST(TermProfiles, PivotAbsentFromCorpusThrows) {
  const Corpus c = small_corpus({{"a"}, {"b"}});
  const Vocabulary v = build_vocabulary({&c}, 1);
  const std::vector<std::string> pivots{"a", "nowhere"};
  EXPECT_THROW(dci::term_profiles(c, v, pivots), Error);
}

TEST(DciProjection, TranslationsGetSimilarProfiles) {
  // Parallel synthetic languages: the profile of s_j should match that of t_j.
  const auto d = generate_synthetic_bilingual(21, 10, 10000, 2000);
  const Vocabulary vs = build_vocabulary({&d.source_unlabeled}, 3);
  const Vocabulary vt = build_vocabulary({&d.target_unlabeled}, 3);
  std::vector<PivotPair> pivots;
  for (int i = 0; i < 100; ++i) {
    pivots.push_back({"s_" + std::to_string(i), "t_" + std::to_string(i), 0.0});
  }
  const CrossLingualProjection proj = dci::build_projection(d.source_unlabeled, d.target_unlabeled, pivots, vs, vt);
  EXPECT_EQ(proj.dims(), 100);
  EXPECT_EQ(proj.source.language, d.source_unlabeled.language);
  EXPECT_EQ(proj.target.language, d.target_unlabeled.language);
  double total = 0.0;
  int n = 0;
  for (int j = 0; j < 500; ++j) {
    const auto a = vs.index_of("s_" + std::to_string(j));
    const auto b = vt.index_of("t_" + std::to_string(j));
    ASSERT_TRUE(a && b);
    total += proj.source.matrix.row(*a).dot(proj.target.matrix.row(*b));
    ++n;
  }
  EXPECT_GE(total / n, 0.9);
}

}  // namespace
}  // namespace cltq
