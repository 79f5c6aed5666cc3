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

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cltq/corpus.hpp"
#include "cltq/dci.hpp"
#include "cltq/evaluation.hpp"
#include "cltq/learner.hpp"
#include "cltq/quantifiers.hpp"
#include "cltq/random.hpp"
#include "cltq/svd.hpp"
#include "cltq/vectorizer.hpp"
#include "cltq/wilcoxon.hpp"

namespace {

using namespace cltq;

const SyntheticBilingual& shared_data() {
  static const SyntheticBilingual data = generate_synthetic_bilingual(1, 2000, 5000, 2000);
  return data;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

// range(1) selects a decaying spectrum (like a pivot weight matrix) or the
// flat spectrum of a plain random matrix, the slow case for block iteration.
void BM_TruncatedSvd(benchmark::State& state) {
  Eigen::MatrixXd w = random_matrix(state.range(0), 450, 3);
  if (state.range(1)) {
    Eigen::VectorXd decay(450);
    for (int i = 0; i < 450; ++i) decay(i) = 1.0 / (1.0 + 0.1 * i);
    w = w * decay.asDiagonal() * random_matrix(450, 450, 4);
  }
  for (auto _ : state) benchmark::DoNotOptimize(truncated_svd(w, 100).singular_values);
}
BENCHMARK(BM_TruncatedSvd)->Args({2000, 1})->Args({2000, 0})->Unit(benchmark::kMillisecond);

void BM_TfidfVectorize(benchmark::State& state) {
  const Corpus& c = shared_data().source_unlabeled;
  const Vocabulary v = build_vocabulary({&c}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(tfidf_vectorize(c, v));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_TfidfVectorize)->Unit(benchmark::kMillisecond);

void BM_DciTermProfiles(benchmark::State& state) {
  const Corpus& c = shared_data().source_unlabeled;
  const Vocabulary v = build_vocabulary({&c}, 3);
  std::vector<std::string> pivots;
  for (std::int64_t i = 0; i < state.range(0); ++i) pivots.push_back("s_" + std::to_string(20 + i));
  for (auto _ : state) benchmark::DoNotOptimize(dci::term_profiles(c, v, pivots).matrix);
}
BENCHMARK(BM_DciTermProfiles)->Arg(100)->Arg(450)->Unit(benchmark::kMillisecond);

void BM_TrainLinearModel(benchmark::State& state) {
  const Eigen::Index n = 2000, d = state.range(0);
  const Eigen::MatrixXd x = random_matrix(n, d, 5);
  const Eigen::VectorXd w_true = random_matrix(d, 1, 6).col(0);
  std::vector<Label> y;
  for (Eigen::Index i = 0; i < n; ++i) y.push_back(x.row(i).dot(w_true) > 0 ? Label::kPositive : Label::kNegative);
  TrainConfig cfg;
  cfg.loss = state.range(1) ? Loss::kHinge : Loss::kLogistic;
  cfg.elastic_alpha = state.range(1) ? 0.85 : 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(train(x, y, cfg).weights);
}
BENCHMARK(BM_TrainLinearModel)->Args({100, 0})->Args({100, 1})->Args({450, 0})->Unit(benchmark::kMillisecond);

void BM_Protocol(benchmark::State& state) {
  std::vector<Label> pool;
  std::vector<std::uint8_t> decisions;
  std::vector<double> posteriors;
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const bool pos = i < 1000;
    pool.push_back(pos ? Label::kPositive : Label::kNegative);
    decisions.push_back(rng.uniform01() < (pos ? 0.8 : 0.2));
    posteriors.push_back(rng.uniform01());
  }
  const RateEstimates rates{0.8, 0.2, 0.7, 0.3};
  std::vector<std::unique_ptr<Quantifier>> q;
  std::vector<ProtocolEntry> entries;
  for (QuantMethod m : {QuantMethod::kCC, QuantMethod::kPCC, QuantMethod::kACC, QuantMethod::kPACC}) {
    q.push_back(make_quantifier(m, rates));
    entries.push_back({std::string(quant_method_name(m)), q.back().get(), decisions, posteriors});
  }
  ProtocolOptions options;
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(entries, pool, options));
}
BENCHMARK(BM_Protocol)->Unit(benchmark::kMillisecond);

void BM_Wilcoxon(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd a = random_matrix(n, 2, 8);
  const std::vector<double> x(a.col(0).begin(), a.col(0).end());
  const std::vector<double> y(a.col(1).begin(), a.col(1).end());
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_signed_rank(x, y));
}
BENCHMARK(BM_Wilcoxon)->Arg(25)->Arg(2100);

}  // namespace

BENCHMARK_MAIN();
