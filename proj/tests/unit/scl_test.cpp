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

#include <cstdio>

#include <Eigen/Dense>

#include "cltq/corpus.hpp"
#include "cltq/error.hpp"
#include "cltq/scl.hpp"
#include "cltq/vectorizer.hpp"

namespace cltq {
namespace {

std::vector<PivotPair> aligned_pivots(int n) {
  std::vector<PivotPair> p;
  for (int i = 0; i < n; ++i) p.push_back({"s_" + std::to_string(i), "t_" + std::to_string(i), 0.0});
  return p;
}

struct SclFixture {
  SyntheticBilingual data = generate_synthetic_bilingual(8, 10, 3000, 150);
  Vocabulary vs = build_vocabulary({&data.source_unlabeled}, 2);
  Vocabulary vt = build_vocabulary({&data.target_unlabeled}, 2);
};

TEST(SclAuxiliary, ShapeAndMaskedPivotRows) {
  SclFixture f;
  const auto pivots = aligned_pivots(12);
  const Eigen::MatrixXd w = scl::train_auxiliary_predictors(f.data.source_unlabeled, f.data.target_unlabeled,
                                                            pivots, f.vs, f.vt);
  ASSERT_EQ(w.rows(), static_cast<Eigen::Index>(f.vs.size() + f.vt.size()));
  ASSERT_EQ(w.cols(), 12);
  const auto offset = static_cast<Eigen::Index>(f.vs.size());
  for (int j = 0; j < 12; ++j) {
    EXPECT_EQ(w(*f.vs.index_of(pivots[j].source_term), j), 0.0);
    EXPECT_EQ(w(offset + *f.vt.index_of(pivots[j].target_term), j), 0.0);
  }
  EXPECT_GE(w.minCoeff(), 0.0);
  EXPECT_GT(w.maxCoeff(), 0.0);
}

// Target corpus = the source corpus with every term renamed, so the two
// halves of each auxiliary problem are mirror images.
Corpus renamed_copy(const Corpus& source) {
  Corpus t;
  t.language = "target";
  t.domain = source.domain;
  for (const Document& d : source.documents) {
    std::vector<TermCount> terms;
    for (const TermCount& tc : d.terms()) terms.push_back({"t_" + tc.term.substr(2), tc.count});
    t.documents.emplace_back(d.id(), terms);
  }
  return t;
}

TEST(SclAuxiliary, MirroredCorporaGiveMatchingWeights) {
  SclFixture f;
  const Corpus target = renamed_copy(f.data.source_unlabeled);
  const Vocabulary vt = build_vocabulary({&target}, 2);
  ASSERT_EQ(vt.size(), f.vs.size());
  std::vector<PivotPair> pivots;
  for (int i = 10; i < 16; ++i) pivots.push_back({"s_" + std::to_string(i), "t_" + std::to_string(i), 0.0});
  const Eigen::MatrixXd w = scl::train_auxiliary_predictors(f.data.source_unlabeled, target, pivots, f.vs, vt);
  const auto offset = static_cast<Eigen::Index>(f.vs.size());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    Eigen::VectorXd a(offset), b(offset);
    for (std::size_t k = 0; k < f.vs.size(); ++k) {
      a(static_cast<Eigen::Index>(k)) = w(static_cast<Eigen::Index>(k), j);
      b(static_cast<Eigen::Index>(k)) = w(offset + *vt.index_of("t_" + f.vs.term(k).substr(2)), j);
    }
    ASSERT_GT(a.norm(), 0.0);
    EXPECT_LE((a / a.norm() - b / b.norm()).cwiseAbs().maxCoeff(), 1e-9) << "pivot " << j;
  }
}

TEST(SclAuxiliary, PivotInEveryDocumentGivesZeroColumn) {
  Corpus s;
  s.language = "src";
  Corpus t;
  t.language = "tgt";
  for (int i = 0; i < 40; ++i) {
    s.documents.emplace_back("s" + std::to_string(i),
                             std::vector<TermCount>{{"always", 1}, {i % 2 ? "odd" : "even", 1}, {"x", 1}});
    t.documents.emplace_back("t" + std::to_string(i),
                             std::vector<TermCount>{{"immer", 1}, {i % 2 ? "ungerade" : "gerade", 1}});
  }
  const Vocabulary vs = build_vocabulary({&s}, 1);
  const Vocabulary vt = build_vocabulary({&t}, 1);
  const std::vector<PivotPair> pivots{{"always", "immer", 0.0}, {"odd", "ungerade", 0.0}};
  const Eigen::MatrixXd w = scl::train_auxiliary_predictors(s, t, pivots, vs, vt);
  EXPECT_TRUE(w.col(0).isZero(0.0));
  // "odd" is recoverable from the absence of "even".
  EXPECT_FALSE(w.col(1).isZero(0.0));
}

TEST(SclAuxiliary, PivotMissingFromVocabularyThrows) {
  SclFixture f;
  const std::vector<PivotPair> pivots{{"s_0", "t_missing", 0.0}};
  EXPECT_THROW(scl::train_auxiliary_predictors(f.data.source_unlabeled, f.data.target_unlabeled, pivots, f.vs, f.vt),
               Error);
}

TEST(SclAuxiliary, ThreadCountDoesNotChangeResult) {
  SclFixture f;
  const auto pivots = aligned_pivots(8);
  scl::AuxiliaryOptions one;
  one.block_size = 3;
  scl::AuxiliaryOptions many = one;
  many.jobs = 3;
  const Eigen::MatrixXd a =
      scl::train_auxiliary_predictors(f.data.source_unlabeled, f.data.target_unlabeled, pivots, f.vs, f.vt, one);
  const Eigen::MatrixXd b =
      scl::train_auxiliary_predictors(f.data.source_unlabeled, f.data.target_unlabeled, pivots, f.vs, f.vt, many);
  EXPECT_EQ(a, b);
}

TEST(SclProjection, SplitsOrthonormalThetaByLanguage) {
  SclFixture f;
  const auto pivots = aligned_pivots(20);
  scl::SclOptions options;
  options.dims = 5;
  const CrossLingualProjection p =
      scl::build_projection(f.data.source_unlabeled, f.data.target_unlabeled, pivots, f.vs, f.vt, options);
  ASSERT_EQ(p.source.rows(), static_cast<Eigen::Index>(f.vs.size()));
  ASSERT_EQ(p.target.rows(), static_cast<Eigen::Index>(f.vt.size()));
  EXPECT_EQ(p.dims(), 5);
  EXPECT_EQ(p.source.method, ProjectionMethod::kScl);
  EXPECT_EQ(p.target.language, "target");
  const Eigen::MatrixXd gram = p.source.matrix.transpose() * p.source.matrix +
                               p.target.matrix.transpose() * p.target.matrix;
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
}

}  // namespace
}  // namespace cltq
