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

#ifndef CLTQ_PIPELINE_HPP_
#define CLTQ_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cltq/corpus.hpp"
#include "cltq/error.hpp"
#include "cltq/evaluation.hpp"
#include "cltq/pivots.hpp"
#include "cltq/projection.hpp"
#include "cltq/quantifiers.hpp"
#include "cltq/report.hpp"

namespace cltq {

struct ExperimentConfig {
  std::filesystem::path source_labeled;
  std::filesystem::path source_unlabeled;
  std::filesystem::path target_unlabeled;
  std::filesystem::path target_test;
  std::filesystem::path dictionary;

  std::vector<ProjectionMethod> projections{ProjectionMethod::kScl, ProjectionMethod::kDci};
  std::vector<QuantMethod> methods{QuantMethod::kCC, QuantMethod::kPCC, QuantMethod::kACC, QuantMethod::kPACC};

  PivotOptions pivots;
  std::optional<std::size_t> oracle_budget;  // default 10 * m
  std::size_t dims = 100;                    // SCL only; DCI uses m
  double elastic_alpha = 0.85;               // SCL hard classifier
  std::uint32_t min_df = 3;                  // vocabulary cut, must not exceed phi
  // Subtract from projected documents the mean projection of their language's
  // unlabeled corpus, which removes a constant offset between the languages.
  bool center_projected = true;
  std::size_t folds_grid = 5;
  std::size_t folds_rates = 10;

  std::vector<double> levels = default_prevalence_levels();
  std::size_t samples_per_level = 100;
  std::size_t sample_size = 200;

  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = "out";
  bool use_cache = true;

  std::size_t effective_budget() const { return oracle_budget.value_or(10 * pivots.m); }
};

// Applies one `key = value` setting; the keys are the long CLI flag names
// with dashes replaced by underscores (plus the five input paths and `out`).
// Relative paths are resolved against `base_dir`. Throws ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

// Flat `key = value` text; blank lines and lines starting with '#' are
// skipped. Unknown or repeated keys are errors (with line numbers).
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);
// Inverse of parse_config. Every key is written; paths are made relative to
// `base_dir` when possible.
void write_config(const ExperimentConfig& config, std::ostream& out, const std::filesystem::path& base_dir);

// Throws ConfigError when a value is out of range.
void validate_config(const ExperimentConfig& config);

// A failure inside run_experiment, tagged with the stage that raised it.
// input_problem is set for missing or malformed input files.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message, bool input_problem)
      : Error("[" + stage + "] " + message), stage_(std::move(stage)), input_problem_(input_problem) {}

  const std::string& stage() const { return stage_; }
  bool input_problem() const { return input_problem_; }

 private:
  std::string stage_;
  bool input_problem_;
};

struct ExperimentInputs {
  Corpus source_labeled;
  Corpus source_unlabeled;
  Corpus target_unlabeled;
  Corpus target_test;
  std::vector<TermPair> dictionary;
  std::uint64_t fingerprint = 0;  // content hash used as cache key
};

// Throws StageError("ingest", ..., true).
ExperimentInputs load_inputs(const ExperimentConfig& config);
ExperimentInputs make_inputs(SyntheticBilingual data);

// Per projection: the pieces that feed the quantifiers.
struct ProjectionRun {
  ProjectionMethod method = ProjectionMethod::kScl;
  std::vector<PivotPair> pivots;
  double hard_c = 0.0;
  double soft_c = 0.0;
  RateEstimates rates;
  double source_cv_accuracy = 0.0;  // held-out accuracy of the hard model
  double target_accuracy = 0.0;     // on the whole target test pool
};

struct ExperimentResult {
  std::vector<ProjectionRun> projections;
  std::vector<SampleRecord> records;
  std::vector<MethodSummary> summary;
  std::filesystem::path results_path;
  std::filesystem::path summary_path;
};

// Full pipeline. Writes out_dir/results.tsv and out_dir/summary.tsv and, when
// enabled, stage outputs under out_dir/cache/<key>/. Progress goes to `log`
// when non-null. Method names are "<SCL|DCI>+<CC|PCC|ACC|PACC>".
ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentInputs& inputs,
                                std::ostream* log = nullptr);
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

std::string method_label(ProjectionMethod projection, QuantMethod method);

}  // namespace cltq

#endif  // CLTQ_PIPELINE_HPP_
