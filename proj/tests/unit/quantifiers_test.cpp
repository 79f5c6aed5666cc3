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

#include "cltq/error.hpp"
#include "cltq/quantifiers.hpp"
#include "cltq/random.hpp"

namespace cltq {
namespace {

using L = Label;

TEST(EstimateRates, CountsPerClass) {
  const std::vector<std::uint8_t> d{1, 1, 0, 1, 0, 0, 1, 0};
  const std::vector<double> p{0.8, 0.6, 0.4, 0.6, 0.1, 0.3, 0.2, 0.2};
  const std::vector<Label> y{L::kPositive, L::kPositive, L::kPositive, L::kPositive,
                             L::kNegative, L::kNegative, L::kNegative, L::kNegative};
  const RateEstimates r = estimate_rates(d, p, y);
  EXPECT_DOUBLE_EQ(r.tpr_hard, 0.75);
  EXPECT_DOUBLE_EQ(r.fpr_hard, 0.25);
  EXPECT_NEAR(r.tpr_soft, 0.6, 1e-15);
  EXPECT_NEAR(r.fpr_soft, 0.2, 1e-15);
}

TEST(EstimateRates, SoftRateIsPositiveMean) {
  const std::vector<std::uint8_t> d{1, 1, 0};
  const std::vector<double> p{0.8, 0.6, 0.1};
  const std::vector<Label> y{L::kPositive, L::kPositive, L::kNegative};
  EXPECT_NEAR(estimate_rates(d, p, y).tpr_soft, 0.7, 1e-15);
}

TEST(EstimateRates, PerfectClassifierAndErrors) {
  const std::vector<std::uint8_t> d{1, 0};
  const std::vector<double> p{1.0, 0.0};
  const std::vector<Label> y{L::kPositive, L::kNegative};
  const RateEstimates r = estimate_rates(d, p, y);
  EXPECT_EQ(r.tpr_hard, 1.0);
  EXPECT_EQ(r.fpr_hard, 0.0);
  const std::vector<Label> one{L::kPositive, L::kPositive};
  EXPECT_THROW(estimate_rates(d, p, one), Error);
  const std::vector<Label> short_y{L::kPositive};
  EXPECT_THROW(estimate_rates(d, p, short_y), Error);
}

TEST(ClassifyAndCount, Examples) {
  EXPECT_DOUBLE_EQ(cc(std::vector<std::uint8_t>{1, 1, 0, 0}).p_pos, 0.5);
  EXPECT_DOUBLE_EQ(cc(std::vector<std::uint8_t>{0, 0, 0}).p_pos, 0.0);
  EXPECT_DOUBLE_EQ(cc(std::vector<std::uint8_t>{1, 0, 0, 0, 1}).p_pos, 0.4);
  EXPECT_DOUBLE_EQ(cc(std::vector<std::uint8_t>{1, 0, 0, 0, 1}).p_neg(), 0.6);
  EXPECT_THROW(cc(std::vector<std::uint8_t>{}), Error);
  EXPECT_THROW(cc(std::vector<std::uint8_t>{2}), Error);
}

TEST(ProbabilisticClassifyAndCount, Examples) {
  EXPECT_DOUBLE_EQ(pcc(std::vector<double>{0.9, 0.1}).p_pos, 0.5);
  EXPECT_DOUBLE_EQ(pcc(std::vector<double>{1.0, 1.0, 1.0}).p_pos, 1.0);
  EXPECT_NEAR(pcc(std::vector<double>{0.2, 0.4, 0.6}).p_pos, 0.4, 1e-15);
  EXPECT_THROW(pcc(std::vector<double>{1.2}), Error);
  EXPECT_THROW(pcc(std::vector<double>{}), Error);
  EXPECT_EQ(pcc(std::vector<double>{0.5}).method, QuantMethod::kPCC);
}

TEST(ProbabilisticClassifyAndCount, EqualsCcOnCrispPosteriors) {
  Rng rng(3);
  std::vector<std::uint8_t> d;
  std::vector<double> p;
  for (int i = 0; i < 101; ++i) {
    d.push_back(rng.uniform01() < 0.3);
    p.push_back(d.back());
  }
  EXPECT_DOUBLE_EQ(pcc(p).p_pos, cc(d).p_pos);
}

TEST(Adjust, Examples) {
  EXPECT_DOUBLE_EQ(adjust(0.6, 1.0, 0.0).p_pos, 0.6);
  EXPECT_NEAR(adjust(0.5, 0.8, 0.2).p_pos, 0.5, 1e-15);
  EXPECT_EQ(adjust(0.1, 0.7, 0.3).p_pos, 0.0);
  EXPECT_NEAR(adjust(0.1, 0.7, 0.3).raw, -0.5, 1e-15);
  EXPECT_EQ(adjust(0.95, 0.7, 0.3).p_pos, 1.0);
  EXPECT_EQ(adjust(0.5, 0.8, 0.2, QuantMethod::kPACC).method, QuantMethod::kPACC);
}

TEST(Adjust, DegenerateRatesFallBackToUnadjusted) {
  const PrevalenceEstimate e = adjust(0.42, 0.5, 0.5 - 1e-8);
  EXPECT_TRUE(e.degenerate_rates);
  EXPECT_DOUBLE_EQ(e.p_pos, 0.42);
  EXPECT_FALSE(adjust(0.42, 0.6, 0.5).degenerate_rates);
}

TEST(Adjust, MonotoneInObservedRate) {
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double p = adjust(i / 100.0, 0.85, 0.2).p_pos;
    EXPECT_GE(p, prev);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    prev = p;
  }
}

TEST(Adjust, InvertsExpectedObservedRate) {
  // For any true prevalence q, E[p_cc] = q tpr + (1 - q) fpr; adjusting recovers q.
  for (double q = 0.0; q <= 1.0; q += 0.05) {
    const double tpr = 0.8, fpr = 0.15;
    EXPECT_NEAR(adjust(q * tpr + (1 - q) * fpr, tpr, fpr).p_pos, q, 1e-12);
  }
}

TEST(Adjust, UnbiasedOnSimulatedClassifier) {
  // Brute-force expectation: average ACC over many simulated samples with a
  // classifier of known rates.
  const double tpr = 0.8, fpr = 0.2, q = 0.3;
  Rng rng(99);
  double total = 0.0;
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    std::vector<std::uint8_t> d;
    for (int i = 0; i < 200; ++i) {
      const bool pos = i < 60;
      d.push_back(rng.uniform01() < (pos ? tpr : fpr));
    }
    total += adjust(cc(d).p_pos, tpr, fpr).p_pos;
  }
  EXPECT_NEAR(total / reps, q, 0.005);
}

TEST(Quantifier, FactoryDispatch) {
  const RateEstimates rates{0.8, 0.2, 0.7, 0.3};
  const std::vector<std::uint8_t> d{1, 1, 0, 0};
  const std::vector<double> p{0.9, 0.5, 0.5, 0.1};
  const ClassifierOutputs out{d, p};
  EXPECT_DOUBLE_EQ(make_quantifier(QuantMethod::kCC)->estimate(out).p_pos, 0.5);
  EXPECT_DOUBLE_EQ(make_quantifier(QuantMethod::kPCC)->estimate(out).p_pos, 0.5);
  EXPECT_NEAR(make_quantifier(QuantMethod::kACC, rates)->estimate(out).p_pos, 0.5, 1e-15);
  const std::vector<double> p2{0.7, 0.7, 0.3, 0.3};
  EXPECT_NEAR(make_quantifier(QuantMethod::kPACC, rates)->estimate({{}, p2}).p_pos, 0.5, 1e-15);
  const std::vector<double> p3{0.7, 0.7, 0.7, 0.7};
  EXPECT_NEAR(make_quantifier(QuantMethod::kPACC, rates)->estimate({{}, p3}).p_pos, 1.0, 1e-15);
  EXPECT_EQ(make_quantifier(QuantMethod::kPACC, rates)->name(), "PACC");
}

TEST(QuantMethodNames, ParseCaseInsensitive) {
  EXPECT_EQ(parse_quant_method("PaCc"), QuantMethod::kPACC);
  EXPECT_EQ(parse_quant_method("cc"), QuantMethod::kCC);
  EXPECT_FALSE(parse_quant_method("emq").has_value());
  EXPECT_EQ(quant_method_name(QuantMethod::kACC), "ACC");
  EXPECT_TRUE(uses_posteriors(QuantMethod::kPCC));
  EXPECT_FALSE(uses_posteriors(QuantMethod::kACC));
}

}  // namespace
}  // namespace cltq
