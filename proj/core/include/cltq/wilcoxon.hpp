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

#ifndef CLTQ_WILCOXON_HPP_
#define CLTQ_WILCOXON_HPP_

#include <cstddef>
#include <span>

namespace cltq {

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-) in rank units
  double p_value = 1.0;    // two-sided
  std::size_t n = 0;       // pairs left after dropping zero differences
  bool exact = true;
};

// Paired signed-rank test on a - b. Zero differences are dropped and tied
// magnitudes share their mean rank. Exact null distribution for n <= 25,
// normal approximation with continuity and tie correction above.
// Throws cltq::Error on a length mismatch or fewer than 5 pairs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kWilcoxonExactLimit = 25;

}  // namespace cltq

#endif  // CLTQ_WILCOXON_HPP_
