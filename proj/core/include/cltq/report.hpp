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

#ifndef CLTQ_REPORT_HPP_
#define CLTQ_REPORT_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cltq/evaluation.hpp"

namespace cltq {

enum class Metric { kAE = 0, kRAE = 1, kKLD = 2 };
inline constexpr std::array<Metric, 3> kMetrics{Metric::kAE, Metric::kRAE, Metric::kKLD};
std::string_view metric_name(Metric metric);

// Standing of a method against the best one on a metric, from the paired
// Wilcoxon p-value: kTied05 when p >= 0.05 (one dagger), kTied005 when
// 0.005 <= p < 0.05 (two daggers), kWorse below 0.005.
enum class Mark { kBest, kTied05, kTied005, kWorse };
std::string_view mark_symbol(Mark mark);

struct MethodSummary {
  std::string method;
  std::size_t samples = 0;
  std::array<double, 3> mean{};
  std::array<double, 3> p_value{};  // against the best method; 1 for the best itself
  std::array<Mark, 3> mark{};
};

// Methods appear in order of first occurrence. All methods must cover the
// same (level, sample) pairs. The lowest mean wins; ties go to the earlier
// method.
std::vector<MethodSummary> summarize(std::span<const SampleRecord> records);

// TSV: method samples ae ae_p ae_mark rae rae_p rae_mark kld kld_p kld_mark.
void write_summary(std::ostream& out, std::span<const MethodSummary> summary);
void write_summary(const std::filesystem::path& path, std::span<const MethodSummary> summary);

// Markdown table, best in bold, daggers appended.
std::string format_table(std::span<const MethodSummary> summary);

}  // namespace cltq

#endif  // CLTQ_REPORT_HPP_
