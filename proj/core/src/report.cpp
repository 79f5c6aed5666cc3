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

#include "cltq/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "cltq/error.hpp"
#include "cltq/wilcoxon.hpp"

namespace cltq {
namespace {

using SampleKey = std::pair<std::size_t, std::size_t>;

double metric_of(const SampleRecord& r, Metric m) {
  switch (m) {
    case Metric::kAE:
      return r.ae;
    case Metric::kRAE:
      return r.rae;
    case Metric::kKLD:
      return r.kld;
  }
  return 0.0;
}

Mark mark_for(double p) {
  if (p >= 0.05) return Mark::kTied05;
  if (p >= 0.005) return Mark::kTied005;
  return Mark::kWorse;
}

}  // namespace

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kAE:
      return "ae";
    case Metric::kRAE:
      return "rae";
    case Metric::kKLD:
      return "kld";
  }
  return "?";
}

std::string_view mark_symbol(Mark mark) {
  switch (mark) {
    case Mark::kBest:
      return "best";
    case Mark::kTied05:
      return "†";
    case Mark::kTied005:
      return "††";
    case Mark::kWorse:
      return "-";
  }
  return "?";
}

std::vector<MethodSummary> summarize(std::span<const SampleRecord> records) {
  if (records.empty()) throw Error("summarize: no result records");
  std::vector<std::string> names;
  std::map<std::string, std::map<SampleKey, const SampleRecord*>> by_method;
  for (const SampleRecord& r : records) {
    auto [it, inserted] = by_method.try_emplace(r.method);
    if (inserted) names.push_back(r.method);
    if (!it->second.emplace(SampleKey{r.level_index, r.sample_index}, &r).second) {
      throw Error("summarize: duplicate record for " + r.method + " at level " + std::to_string(r.level_index) +
                  ", sample " + std::to_string(r.sample_index));
    }
  }
  const auto& reference = by_method.at(names.front());
  for (const auto& name : names) {
    const auto& rows = by_method.at(name);
    bool same = rows.size() == reference.size();
    for (auto a = rows.begin(), b = reference.begin(); same && a != rows.end(); ++a, ++b) same = a->first == b->first;
    if (!same) throw Error("summarize: " + name + " and " + names.front() + " were evaluated on different samples");
  }

  std::vector<MethodSummary> out(names.size());
  // values[m][method] in the shared sample order
  std::array<std::vector<std::vector<double>>, 3> values;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out[i].method = names[i];
    out[i].samples = reference.size();
    for (Metric m : kMetrics) {
      std::vector<double> v;
      v.reserve(reference.size());
      double sum = 0.0;
      for (const auto& [key, rec] : by_method.at(names[i])) {
        v.push_back(metric_of(*rec, m));
        sum += v.back();
      }
      out[i].mean[static_cast<std::size_t>(m)] = sum / static_cast<double>(v.size());
      values[static_cast<std::size_t>(m)].push_back(std::move(v));
    }
  }

  for (Metric m : kMetrics) {
    const auto mi = static_cast<std::size_t>(m);
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (out[i].mean[mi] < out[best].mean[mi]) best = i;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i == best) {
        out[i].p_value[mi] = 1.0;
        out[i].mark[mi] = Mark::kBest;
        continue;
      }
      const double p = wilcoxon_signed_rank(values[mi][i], values[mi][best]).p_value;
      out[i].p_value[mi] = p;
      out[i].mark[mi] = mark_for(p);
    }
  }
  return out;
}

void write_summary(std::ostream& out, std::span<const MethodSummary> summary) {
  out << "method\tsamples";
  for (Metric m : kMetrics) {
    const std::string name(metric_name(m));
    out << '\t' << name << '\t' << name << "_p\t" << name << "_mark";
  }
  out << '\n';
  char buf[64];
  for (const MethodSummary& s : summary) {
    out << s.method << '\t' << s.samples;
    for (Metric m : kMetrics) {
      const auto mi = static_cast<std::size_t>(m);
      std::snprintf(buf, sizeof buf, "\t%.6f\t%.6g\t", s.mean[mi], s.p_value[mi]);
      out << buf << mark_symbol(s.mark[mi]);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed to write summary");
}

void write_summary(const std::filesystem::path& path, std::span<const MethodSummary> summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_summary(out, summary);
  out.flush();
  if (!out) throw IoError("failed to write " + path.string());
}

std::string format_table(std::span<const MethodSummary> summary) {
  std::ostringstream os;
  os << "| method | AE | RAE | KLD |\n|---|---:|---:|---:|\n";
  char buf[32];
  for (const MethodSummary& s : summary) {
    os << "| " << s.method << " |";
    for (Metric m : kMetrics) {
      const auto mi = static_cast<std::size_t>(m);
      std::snprintf(buf, sizeof buf, "%.3f", s.mean[mi]);
      os << ' ';
      if (s.mark[mi] == Mark::kBest) {
        os << "**" << buf << "**";
      } else {
        os << buf;
        if (s.mark[mi] != Mark::kWorse) os << mark_symbol(s.mark[mi]);
      }
      os << " |";
    }
    os << '\n';
  }
  os << "\nBold: lowest mean. Difference from the best not significant under the "
        "Wilcoxon signed-rank test at alpha = 0.05 (†) or only at alpha = 0.005 (††).\n";
  return os.str();
}

}  // namespace cltq
