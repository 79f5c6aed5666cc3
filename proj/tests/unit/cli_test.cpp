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
#include <sstream>

#include "cli_app.hpp"
#include "temp_dir.hpp"

namespace cltq {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "cltq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* const kFiles[] = {"source_labeled.txt", "source_unlabeled.txt", "target_unlabeled.txt",
                              "target_test.txt", "dictionary.tsv", "experiment.conf"};

TEST(CliSynth, RequiresSeed) {
  testing::TempDir dir;
  const CliResult r = run({"synth", "--out", (dir / "s").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("seed"), std::string::npos);
}

TEST(CliSynth, WritesFilesDeterministically) {
  testing::TempDir dir;
  const auto a = dir / "a";
  const auto b = dir / "b";
  for (const auto& p : {a, b}) {
    const CliResult r = run({"synth", "--seed", "4", "--out", p.string(), "--labeled", "50", "--unlabeled", "80",
                             "--vocab", "40"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : kFiles) {
    ASSERT_TRUE(std::filesystem::exists(a / f)) << f;
    if (std::string(f) != "experiment.conf") {
      EXPECT_EQ(testing::read_file(a / f), testing::read_file(b / f)) << f;
    }
  }
}

TEST(CliRun, MissingDictionaryExitsWithInputError) {
  testing::TempDir dir;
  const auto d = dir / "s";
  ASSERT_EQ(run({"synth", "--seed", "1", "--out", d.string(), "--labeled", "40", "--unlabeled", "60", "--vocab",
                 "40"})
                .code,
            0);
  std::filesystem::remove(d / "dictionary.tsv");
  const CliResult r = run({"run", "--config", (d / "experiment.conf").string(), "--quiet"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find((d / "dictionary.tsv").string()), std::string::npos) << r.err;
}

TEST(CliRun, MissingConfigAndBadFlags) {
  testing::TempDir dir;
  EXPECT_EQ(run({"run", "--config", (dir / "nope.conf").string()}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto conf = dir.write("bad.conf", "seed = 1\nwhat = 3\n");
  const CliResult r = run({"run", "--config", conf.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(CliRun, MethodSubsetThenReport) {
  testing::TempDir dir;
  const auto d = dir / "s";
  ASSERT_EQ(run({"synth", "--seed", "2", "--out", d.string(), "--labeled", "300", "--unlabeled", "1500", "--vocab",
                 "300"})
                .code,
            0);
  const auto conf = dir.write("small.conf",
                              "source_labeled = s/source_labeled.txt\n"
                              "source_unlabeled = s/source_unlabeled.txt\n"
                              "target_unlabeled = s/target_unlabeled.txt\n"
                              "target_test = s/target_test.txt\n"
                              "dictionary = s/dictionary.tsv\n"
                              "out = s/run\n"
                              "min_support = 5\nfolds_grid = 3\nfolds_rates = 3\n"
                              "levels = 0.2,0.5,0.8\nsamples_per_level = 10\nsample_size = 50\n");
  const CliResult r = run({"run", "--config", conf.string(), "--quiet", "--pivots", "30", "--dims", "10",
                           "--seed", "2", "--methods", "cc,acc"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* m : {"SCL+CC", "SCL+ACC", "DCI+CC", "DCI+ACC"}) {
    EXPECT_NE(r.out.find(m), std::string::npos) << m;
  }
  for (const char* m : {"PCC", "PACC"}) EXPECT_EQ(r.out.find(m), std::string::npos) << m;
  const std::string summary = testing::read_file(d / "run" / "summary.tsv");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 5);

  // Two copies of the same results compare as equivalent.
  std::filesystem::copy_file(d / "run" / "results.tsv", dir / "copy.tsv");
  const CliResult rep = run({"report", (d / "run" / "results.tsv").string(), (dir / "copy.tsv").string(),
                             "--summary", (dir / "cmp.tsv").string()});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_NE(rep.out.find("copy.tsv:DCI+ACC"), std::string::npos) << rep.out;
  EXPECT_TRUE(std::filesystem::exists(dir / "cmp.tsv"));

  const auto bad = dir.write("bad.tsv", "not a results file\n");
  EXPECT_EQ(run({"report", bad.string()}).code, 2);
}

}  // namespace
}  // namespace cltq
