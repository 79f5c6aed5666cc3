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

#include "cltq/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cltq/error.hpp"
#include "cltq/parallel.hpp"
#include "cltq/random.hpp"

namespace cltq {
namespace {

double smooth(double p, std::size_t sample_size) {
  const double eps = 1.0 / (2.0 * static_cast<double>(sample_size));
  return (p + eps) / (1.0 + 2.0 * eps);
}

void check_sample_size(std::size_t n) {
  if (n == 0) throw Error("sample size must be at least 1");
}

// Partial Fisher-Yates: the first k entries of `ids` become a uniform draw.
void draw(std::vector<std::size_t>& ids, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
}

const char* const kHeader = "method\tlevel_index\tsample_index\ttrue_prev\test_prev\tae\trae\tkld\tdegenerate_flag";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

template <class T>
T parse_number(std::string_view text, std::size_t line, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

double ae(Distribution2 truth, Distribution2 estimate) { return std::abs(estimate.p_pos - truth.p_pos); }

double rae(Distribution2 truth, Distribution2 estimate, std::size_t sample_size) {
  check_sample_size(sample_size);
  const double tp = smooth(truth.p_pos, sample_size);
  const double tn = smooth(truth.p_neg(), sample_size);
  const double ep = smooth(estimate.p_pos, sample_size);
  const double en = smooth(estimate.p_neg(), sample_size);
  return 0.5 * (std::abs(ep - tp) / tp + std::abs(en - tn) / tn);
}

double kld(Distribution2 truth, Distribution2 estimate, std::size_t sample_size) {
  check_sample_size(sample_size);
  const double tp = smooth(truth.p_pos, sample_size);
  const double tn = smooth(truth.p_neg(), sample_size);
  const double ep = smooth(estimate.p_pos, sample_size);
  const double en = smooth(estimate.p_neg(), sample_size);
  // Rounding can push a near-zero divergence slightly negative.
  return std::max(0.0, tp * std::log(tp / ep) + tn * std::log(tn / en));
}

std::vector<double> default_prevalence_levels() {
  std::vector<double> levels{0.01};
  for (int i = 1; i <= 19; ++i) levels.push_back(i / 20.0);
  levels.push_back(0.99);
  return levels;
}

std::size_t positives_for(double prevalence, std::size_t n) {
  return static_cast<std::size_t>(std::floor(prevalence * static_cast<double>(n) + 0.5));
}

std::uint64_t sample_seed(std::uint64_t base_seed, std::size_t level_index, std::size_t sample_index) {
  return derive_seed(base_seed, {0x617070ULL, level_index, sample_index});
}

SampleSpec app_sample(std::span<const Label> pool, double prevalence, std::size_t n, std::uint64_t seed) {
  if (!(prevalence >= 0.0 && prevalence <= 1.0)) throw Error("app_sample: prevalence outside [0, 1]");
  check_sample_size(n);
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < pool.size(); ++i) (pool[i] == Label::kPositive ? pos : neg).push_back(i);
  const std::size_t k = positives_for(prevalence, n);
  if (pos.size() < k) {
    throw Error("app_sample: pool has " + std::to_string(pos.size()) + " positive documents, " +
                std::to_string(k) + " needed");
  }
  if (neg.size() < n - k) {
    throw Error("app_sample: pool has " + std::to_string(neg.size()) + " negative documents, " +
                std::to_string(n - k) + " needed");
  }
  Rng rng(seed);
  draw(pos, k, rng);
  draw(neg, n - k, rng);
  SampleSpec spec;
  spec.prevalence = prevalence;
  spec.true_prevalence = static_cast<double>(k) / static_cast<double>(n);
  spec.documents.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(k));
  spec.documents.insert(spec.documents.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(n - k));
  std::sort(spec.documents.begin(), spec.documents.end());
  return spec;
}

std::vector<SampleRecord> run_protocol(std::span<const ProtocolEntry> entries, std::span<const Label> pool,
                                       const ProtocolOptions& options) {
  for (const ProtocolEntry& e : entries) {
    if (e.quantifier == nullptr) throw Error("run_protocol: entry '" + e.method + "' has no quantifier");
    if ((!e.decisions.empty() && e.decisions.size() != pool.size()) ||
        (!e.posteriors.empty() && e.posteriors.size() != pool.size())) {
      throw Error("run_protocol: outputs of '" + e.method + "' do not match the pool size");
    }
  }
  const std::size_t per_level = options.samples_per_level;
  const std::size_t per_method = options.levels.size() * per_level;
  const std::size_t n = options.sample_size;
  std::vector<SampleRecord> records(entries.size() * per_method);

  parallel_for(per_method, options.jobs, [&](std::size_t slot) {
    const std::size_t level = slot / per_level;
    const std::size_t index = slot % per_level;
    SampleSpec spec = app_sample(pool, options.levels[level], n, sample_seed(options.base_seed, level, index));
    std::vector<std::uint8_t> decisions;
    std::vector<double> posteriors;
    const Distribution2 truth{spec.true_prevalence};
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const ProtocolEntry& entry = entries[e];
      decisions.clear();
      posteriors.clear();
      for (std::size_t d : spec.documents) {
        if (!entry.decisions.empty()) decisions.push_back(entry.decisions[d]);
        if (!entry.posteriors.empty()) posteriors.push_back(entry.posteriors[d]);
      }
      const PrevalenceEstimate est = entry.quantifier->estimate({decisions, posteriors});
      SampleRecord& r = records[e * per_method + slot];
      r.method = entry.method;
      r.level_index = level;
      r.sample_index = index;
      r.true_prev = truth.p_pos;
      r.est_prev = est.p_pos;
      r.ae = ae(truth, {est.p_pos});
      r.rae = rae(truth, {est.p_pos}, n);
      r.kld = kld(truth, {est.p_pos}, n);
      r.degenerate = est.degenerate_rates;
    }
  });
  return records;
}

void write_results(std::ostream& out, std::span<const SampleRecord> records) {
  out << kHeader << '\n';
  char buf[256];
  for (const SampleRecord& r : records) {
    std::snprintf(buf, sizeof buf, "\t%zu\t%zu\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%d\n", r.level_index, r.sample_index,
                  r.true_prev, r.est_prev, r.ae, r.rae, r.kld, r.degenerate ? 1 : 0);
    out << r.method << buf;
  }
  if (!out) throw IoError("failed to write results");
}

void write_results(const std::filesystem::path& path, std::span<const SampleRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_results(out, records);
  out.flush();
  if (!out) throw IoError("failed to write " + path.string());
}

std::vector<SampleRecord> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing results header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ParseError(1, "unexpected results header");
  std::vector<SampleRecord> records;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 9) {
      throw ParseError(number, "expected 9 fields, found " + std::to_string(f.size()));
    }
    if (f[0].empty()) throw ParseError(number, "empty method name");
    SampleRecord r;
    r.method = std::string(f[0]);
    r.level_index = parse_number<std::size_t>(f[1], number, "level_index");
    r.sample_index = parse_number<std::size_t>(f[2], number, "sample_index");
    r.true_prev = parse_number<double>(f[3], number, "true_prev");
    r.est_prev = parse_number<double>(f[4], number, "est_prev");
    r.ae = parse_number<double>(f[5], number, "ae");
    r.rae = parse_number<double>(f[6], number, "rae");
    r.kld = parse_number<double>(f[7], number, "kld");
    const int flag = parse_number<int>(f[8], number, "degenerate_flag");
    if (flag != 0 && flag != 1) throw ParseError(number, "degenerate_flag must be 0 or 1");
    r.degenerate = flag == 1;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<SampleRecord> load_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_results(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

}  // namespace cltq
