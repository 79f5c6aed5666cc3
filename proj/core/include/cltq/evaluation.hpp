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

#ifndef CLTQ_EVALUATION_HPP_
#define CLTQ_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cltq/corpus.hpp"
#include "cltq/quantifiers.hpp"

namespace cltq {

struct Distribution2 {
  double p_pos = 0.0;
  double p_neg() const { return 1.0 - p_pos; }
};

// |est - true| on the positive class (equal to the two-class mean).
double ae(Distribution2 truth, Distribution2 estimate);
// Both distributions are smoothed with eps = 1 / (2 * sample_size) first:
// p <- (p + eps) / (1 + 2 eps).
double rae(Distribution2 truth, Distribution2 estimate, std::size_t sample_size);
// Natural logarithm; same smoothing as rae.
double kld(Distribution2 truth, Distribution2 estimate, std::size_t sample_size);

// {0.01, 0.05, 0.10, ..., 0.95, 0.99}.
std::vector<double> default_prevalence_levels();

// floor(p * n + 0.5).
std::size_t positives_for(double prevalence, std::size_t n);

// Stable across platforms and thread counts.
std::uint64_t sample_seed(std::uint64_t base_seed, std::size_t level_index, std::size_t sample_index);

struct SampleSpec {
  std::size_t level_index = 0;
  std::size_t sample_index = 0;
  double prevalence = 0.0;
  std::vector<std::size_t> documents;  // ascending indices into the pool

  // Realized positive share, positives_for(prevalence, n) / n.
  double true_prevalence = 0.0;
};

// Draws positives_for(p, n) positives and the rest negatives, each without
// replacement. Throws cltq::Error naming the deficient class.
SampleSpec app_sample(std::span<const Label> pool, double prevalence, std::size_t n, std::uint64_t seed);

struct ProtocolOptions {
  std::vector<double> levels = default_prevalence_levels();
  std::size_t samples_per_level = 100;
  std::size_t sample_size = 200;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;
};

// One method under evaluation: a quantifier and its classifier outputs over
// the whole pool (index-aligned with the pool labels).
struct ProtocolEntry {
  std::string method;
  const Quantifier* quantifier = nullptr;
  std::span<const std::uint8_t> decisions;
  std::span<const double> posteriors;
};

struct SampleRecord {
  std::string method;
  std::size_t level_index = 0;
  std::size_t sample_index = 0;
  double true_prev = 0.0;
  double est_prev = 0.0;
  double ae = 0.0;
  double rae = 0.0;
  double kld = 0.0;
  bool degenerate = false;
};

// Every entry sees the same samples. Records are ordered by entry, then level,
// then sample index, for any thread count.
std::vector<SampleRecord> run_protocol(std::span<const ProtocolEntry> entries, std::span<const Label> pool,
                                       const ProtocolOptions& options);

// TAB-separated, header
//   method level_index sample_index true_prev est_prev ae rae kld degenerate_flag
// with six decimals.
void write_results(std::ostream& out, std::span<const SampleRecord> records);
void write_results(const std::filesystem::path& path, std::span<const SampleRecord> records);
// Throws ParseError (with line number) on malformed content.
std::vector<SampleRecord> read_results(std::istream& in);
std::vector<SampleRecord> load_results(const std::filesystem::path& path);

}  // namespace cltq

#endif  // CLTQ_EVALUATION_HPP_
