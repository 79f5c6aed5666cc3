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

#include "cltq/quantifiers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "cltq/error.hpp"

namespace cltq {
namespace {

constexpr double kDegenerateGap = 1e-6;

class CountQuantifier final : public Quantifier {
 public:
  std::string name() const override { return "CC"; }
  PrevalenceEstimate estimate(const ClassifierOutputs& outputs) const override { return cc(outputs.decisions); }
};

class ProbabilisticCountQuantifier final : public Quantifier {
 public:
  std::string name() const override { return "PCC"; }
  PrevalenceEstimate estimate(const ClassifierOutputs& outputs) const override { return pcc(outputs.posteriors); }
};

class AdjustedQuantifier final : public Quantifier {
 public:
  AdjustedQuantifier(QuantMethod method, const RateEstimates& rates) : method_(method), rates_(rates) {}

  std::string name() const override { return std::string(quant_method_name(method_)); }

  PrevalenceEstimate estimate(const ClassifierOutputs& outputs) const override {
    if (method_ == QuantMethod::kACC) {
      return adjust(cc(outputs.decisions).p_pos, rates_.tpr_hard, rates_.fpr_hard, method_);
    }
    return adjust(pcc(outputs.posteriors).p_pos, rates_.tpr_soft, rates_.fpr_soft, method_);
  }

 private:
  QuantMethod method_;
  RateEstimates rates_;
};

}  // namespace

std::string_view quant_method_name(QuantMethod method) {
  switch (method) {
    case QuantMethod::kCC:
      return "CC";
    case QuantMethod::kPCC:
      return "PCC";
    case QuantMethod::kACC:
      return "ACC";
    case QuantMethod::kPACC:
      return "PACC";
  }
  return "?";
}

std::optional<QuantMethod> parse_quant_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "cc") return QuantMethod::kCC;
  if (lower == "pcc") return QuantMethod::kPCC;
  if (lower == "acc") return QuantMethod::kACC;
  if (lower == "pacc") return QuantMethod::kPACC;
  return std::nullopt;
}

bool uses_posteriors(QuantMethod method) { return method == QuantMethod::kPCC || method == QuantMethod::kPACC; }

RateEstimates estimate_rates(std::span<const std::uint8_t> decisions, std::span<const double> posteriors,
                             std::span<const Label> labels) {
  if (decisions.size() != labels.size() || posteriors.size() != labels.size()) {
    throw Error("estimate_rates: outputs and labels differ in length");
  }
  double hard[2] = {0.0, 0.0};
  double soft[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    hard[c] += decisions[i];
    soft[c] += posteriors[i];
    ++count[c];
  }
  if (count[0] == 0 || count[1] == 0) {
    throw Error(std::string("estimate_rates: no ") + (count[0] == 0 ? "negative" : "positive") + " examples");
  }
  RateEstimates r;
  r.tpr_hard = hard[1] / static_cast<double>(count[1]);
  r.fpr_hard = hard[0] / static_cast<double>(count[0]);
  r.tpr_soft = soft[1] / static_cast<double>(count[1]);
  r.fpr_soft = soft[0] / static_cast<double>(count[0]);
  return r;
}

RateEstimates estimate_rates(const CvPredictions& cv) { return estimate_rates(cv.hard, cv.soft, cv.labels); }

PrevalenceEstimate cc(std::span<const std::uint8_t> decisions) {
  if (decisions.empty()) throw Error("cc: empty sample");
  std::size_t positives = 0;
  for (std::uint8_t d : decisions) {
    if (d > 1) throw Error("cc: decision outside {0, 1}");
    positives += d;
  }
  const double share = static_cast<double>(positives) / static_cast<double>(decisions.size());
  return {share, QuantMethod::kCC, false, share};
}

PrevalenceEstimate pcc(std::span<const double> posteriors) {
  if (posteriors.empty()) throw Error("pcc: empty sample");
  double sum = 0.0;
  for (double p : posteriors) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("pcc: posterior outside [0, 1]");
    sum += p;
  }
  const double mean = sum / static_cast<double>(posteriors.size());
  return {std::clamp(mean, 0.0, 1.0), QuantMethod::kPCC, false, mean};
}

PrevalenceEstimate adjust(double p_cc, double tpr, double fpr, QuantMethod method) {
  const double gap = tpr - fpr;
  if (std::abs(gap) < kDegenerateGap) return {std::clamp(p_cc, 0.0, 1.0), method, true, p_cc};
  const double raw = (p_cc - fpr) / gap;
  return {std::clamp(raw, 0.0, 1.0), method, false, raw};
}

std::unique_ptr<Quantifier> make_quantifier(QuantMethod method, const RateEstimates& rates) {
  switch (method) {
    case QuantMethod::kCC:
      return std::make_unique<CountQuantifier>();
    case QuantMethod::kPCC:
      return std::make_unique<ProbabilisticCountQuantifier>();
    case QuantMethod::kACC:
    case QuantMethod::kPACC:
      return std::make_unique<AdjustedQuantifier>(method, rates);
  }
  throw Error("unknown quantification method");
}

}  // namespace cltq
