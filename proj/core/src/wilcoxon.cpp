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

#include "cltq/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "cltq/error.hpp"

namespace cltq {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("wilcoxon: samples differ in length (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  if (a.size() < 5) throw Error("wilcoxon: need at least 5 pairs");

  std::vector<double> diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diff.push_back(d);
  }
  WilcoxonResult result;
  result.n = diff.size();
  if (diff.empty()) return result;

  const std::size_t n = diff.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::abs(diff[i]) < std::abs(diff[j]); });

  // Ranks are kept doubled so that mean ranks of ties stay integral.
  std::vector<std::size_t> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(diff[order[j + 1]]) == std::abs(diff[order[i]])) ++j;
    const std::size_t doubled = i + j + 2;  // 2 * mean of ranks i+1 .. j+1
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }

  std::size_t plus2 = 0;
  std::size_t total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (diff[i] > 0.0) plus2 += rank2[i];
  }
  const std::size_t w2 = std::min(plus2, total2 - plus2);
  result.statistic = static_cast<double>(w2) / 2.0;

  if (n <= kWilcoxonExactLimit) {
    // ways[s] = number of sign assignments whose positive doubled-rank sum is s.
    std::vector<double> ways(total2 + 1, 0.0);
    ways[0] = 1.0;
    std::size_t reach = 0;
    for (std::size_t r : rank2) {
      for (std::size_t s = reach + 1; s-- > 0;) {
        if (ways[s] != 0.0) ways[s + r] += ways[s];
      }
      reach += r;
    }
    double tail = 0.0;
    for (std::size_t s = 0; s <= w2; ++s) tail += ways[s];
    result.p_value = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
    result.exact = true;
    return result;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  const double z = std::min(0.0, result.statistic - mean + 0.5) / std::sqrt(variance);
  result.p_value = std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
  result.exact = false;
  return result;
}

}  // namespace cltq
