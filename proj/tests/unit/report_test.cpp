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

#include <sstream>

#include "cltq/error.hpp"
#include "cltq/random.hpp"
#include "cltq/report.hpp"

namespace cltq {
namespace {

// One record per (level, sample) with the given AE; RAE and KLD follow AE.
void add_method(std::vector<SampleRecord>& out, const std::string& name, const std::vector<double>& errors) {
  for (std::size_t i = 0; i < errors.size(); ++i) {
    SampleRecord r;
    r.method = name;
    r.level_index = i / 10;
    r.sample_index = i % 10;
    r.true_prev = 0.5;
    r.est_prev = 0.5 + errors[i];
    r.ae = errors[i];
    r.rae = 2 * errors[i];
    r.kld = errors[i] * errors[i];
    out.push_back(r);
  }
}

std::vector<double> noise(std::size_t n, double offset, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = offset + rng.uniform(0.0, 0.1);
  return v;
}

TEST(Summarize, SingleMethodIsBest) {
  std::vector<SampleRecord> records;
  add_method(records, "DCI+PACC", noise(30, 0.0, 1));
  const auto s = summarize(records);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].samples, 30u);
  for (Metric m : kMetrics) {
    EXPECT_EQ(s[0].mark[static_cast<int>(m)], Mark::kBest);
    EXPECT_EQ(s[0].p_value[static_cast<int>(m)], 1.0);
  }
  const std::string table = format_table(s);
  EXPECT_NE(table.find("**"), std::string::npos);
  // Daggers appear only in the legend below the table.
  EXPECT_EQ(table.substr(0, table.rfind("|")).find("†"), std::string::npos) << table;
}

TEST(Summarize, IdenticalResultsAreTiedAtBothLevels) {
  std::vector<SampleRecord> records;
  const auto e = noise(40, 0.0, 2);
  add_method(records, "A", e);
  add_method(records, "B", e);
  const auto s = summarize(records);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].mark[0], Mark::kBest);  // ties go to the earlier method
  EXPECT_EQ(s[1].mark[0], Mark::kTied05);
  EXPECT_EQ(s[1].p_value[0], 1.0);
  EXPECT_EQ(mark_symbol(s[1].mark[0]), "†");
}

TEST(Summarize, OracleBeatsNoisyMethod) {
  std::vector<SampleRecord> records;
  add_method(records, "noisy", noise(100, 0.05, 3));
  add_method(records, "oracle", std::vector<double>(100, 0.0));
  const auto s = summarize(records);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].method, "noisy");
  EXPECT_EQ(s[1].mark[0], Mark::kBest);
  EXPECT_EQ(s[0].mark[0], Mark::kWorse);
  EXPECT_LT(s[0].p_value[0], 0.005);
  EXPECT_NEAR(s[0].mean[0], 0.1, 0.01);
  const std::string table = format_table(s);
  EXPECT_NE(table.find("**0.000"), std::string::npos) << table;
}

TEST(Summarize, MarksFollowPValueThresholds) {
  // Small paired sets give p-values in each band.
  std::vector<SampleRecord> records;
  add_method(records, "best", std::vector<double>(6, 0.0));
  add_method(records, "close", {0.0, 0.0, 0.0, 0.0, 0.0, 0.01});  // one nonzero pair, p = 1
  add_method(records, "mid", {0.01, 0.02, 0.03, 0.04, 0.05, 0.06});
  const auto s = summarize(records);
  EXPECT_EQ(s[1].mark[0], Mark::kTied05);
  EXPECT_NEAR(s[2].p_value[0], 2.0 / 64.0, 1e-15);
  EXPECT_EQ(s[2].mark[0], Mark::kTied005);
  EXPECT_EQ(mark_symbol(Mark::kTied005), "††");
}

TEST(Summarize, RejectsInconsistentInput) {
  std::vector<SampleRecord> records;
  add_method(records, "A", noise(10, 0.0, 4));
  add_method(records, "B", noise(9, 0.0, 5));
  EXPECT_THROW(summarize(records), Error);
  std::vector<SampleRecord> dup;
  add_method(dup, "A", noise(10, 0.0, 4));
  dup.push_back(dup.front());
  EXPECT_THROW(summarize(dup), Error);
}

TEST(WriteSummary, TsvLayout) {
  std::vector<SampleRecord> records;
  add_method(records, "A", noise(20, 0.0, 6));
  add_method(records, "B", noise(20, 0.2, 7));
  std::stringstream out;
  write_summary(out, summarize(records));
  std::string header;
  std::getline(out, header);
  EXPECT_EQ(header, "method\tsamples\tae\tae_p\tae_mark\trae\trae_p\trae_mark\tkld\tkld_p\tkld_mark");
  std::string row;
  std::getline(out, row);
  EXPECT_EQ(row.substr(0, 5), "A\t20\t");
  EXPECT_NE(row.find("best"), std::string::npos);
}

}  // namespace
}  // namespace cltq
