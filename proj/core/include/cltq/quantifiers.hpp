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

#ifndef CLTQ_QUANTIFIERS_HPP_
#define CLTQ_QUANTIFIERS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cltq/corpus.hpp"
#include "cltq/learner.hpp"

namespace cltq {

enum class QuantMethod { kCC, kPCC, kACC, kPACC };

std::string_view quant_method_name(QuantMethod method);
// Case-insensitive; "cc", "pcc", "acc", "pacc".
std::optional<QuantMethod> parse_quant_method(std::string_view name);
// CC and ACC consume hard decisions, PCC and PACC posteriors.
bool uses_posteriors(QuantMethod method);

struct RateEstimates {
  double tpr_hard = 1.0;
  double fpr_hard = 0.0;
  double tpr_soft = 1.0;
  double fpr_soft = 0.0;
};

struct PrevalenceEstimate {
  double p_pos = 0.0;
  QuantMethod method = QuantMethod::kCC;
  // Set when tpr and fpr were too close to invert; p_pos is then unadjusted.
  bool degenerate_rates = false;
  // The estimate before clipping to [0, 1]; may leave the interval for ACC/PACC.
  double raw = 0.0;

  double p_neg() const { return 1.0 - p_pos; }
};

// Means of the held-out decisions and posteriors per true class.
// Throws cltq::Error if a class is absent or the sizes differ.
RateEstimates estimate_rates(std::span<const std::uint8_t> decisions, std::span<const double> posteriors,
                             std::span<const Label> labels);
RateEstimates estimate_rates(const CvPredictions& cv);

// Throws cltq::Error on an empty sample or a decision other than 0/1.
PrevalenceEstimate cc(std::span<const std::uint8_t> decisions);
// Throws cltq::Error on an empty sample or a posterior outside [0, 1].
PrevalenceEstimate pcc(std::span<const double> posteriors);

// clip((p_cc - fpr) / (tpr - fpr), 0, 1). When |tpr - fpr| < 1e-6 returns
// p_cc flagged as degenerate.
PrevalenceEstimate adjust(double p_cc, double tpr, double fpr, QuantMethod method = QuantMethod::kACC);

// Per-document classifier outputs for one sample. A quantifier reads only the
// span it needs; the other may be empty.
struct ClassifierOutputs {
  std::span<const std::uint8_t> decisions;
  std::span<const double> posteriors;
};

class Quantifier {
 public:
  virtual ~Quantifier() = default;
  virtual std::string name() const = 0;
  virtual PrevalenceEstimate estimate(const ClassifierOutputs& outputs) const = 0;
};

// CC/PCC ignore `rates`.
std::unique_ptr<Quantifier> make_quantifier(QuantMethod method, const RateEstimates& rates = {});

}  // namespace cltq

#endif  // CLTQ_QUANTIFIERS_HPP_
