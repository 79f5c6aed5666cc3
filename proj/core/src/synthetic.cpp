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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cltq/corpus.hpp"
#include "cltq/error.hpp"
#include "cltq/random.hpp"

namespace cltq {
namespace {

// Cumulative (unnormalized) term weights of one class-conditional multinomial.
struct TermDistribution {
  std::vector<double> cumulative;

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform01() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 cumulative.size() - 1);
  }
};

struct Generator {
  TermDistribution positive;
  TermDistribution negative;
  const SyntheticShape* shape;

  Corpus make(std::uint64_t seed, std::size_t n, bool keep_labels, const std::string& prefix,
              const std::string& language, const std::string& id_prefix) const {
    Rng rng(seed);
    std::vector<Label> labels(n, Label::kNegative);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>((n + 1) / 2), Label::kPositive);
    rng.shuffle(labels.begin(), labels.end());

    const std::size_t vocab = positive.cumulative.size();
    std::vector<std::uint32_t> counts(vocab, 0);
    std::vector<std::size_t> touched;

    Corpus corpus;
    corpus.language = language;
    corpus.domain = "synthetic";
    corpus.documents.reserve(n);
    for (std::size_t d = 0; d < n; ++d) {
      const TermDistribution& dist = labels[d] == Label::kPositive ? positive : negative;
      const std::uint32_t span = shape->max_length - shape->min_length + 1;
      const std::uint32_t length = shape->min_length + static_cast<std::uint32_t>(rng.below(span));
      touched.clear();
      for (std::uint32_t t = 0; t < length; ++t) {
        const std::size_t term = dist.draw(rng);
        if (counts[term]++ == 0) touched.push_back(term);
      }
      std::vector<TermCount> terms;
      terms.reserve(touched.size());
      for (std::size_t term : touched) {
        terms.push_back({prefix + std::to_string(term), counts[term]});
        counts[term] = 0;
      }
      corpus.documents.emplace_back(id_prefix + std::to_string(d), std::move(terms));
    }
    if (keep_labels) corpus.labels = std::move(labels);
    return corpus;
  }
};

}  // namespace

SyntheticBilingual generate_synthetic_bilingual(std::uint64_t seed, std::size_t n_labeled,
                                                std::size_t n_unlabeled, std::size_t vocab_size,
                                                const SyntheticShape& shape) {
  if (vocab_size < 20) throw Error("synthetic corpus: vocab_size must be >= 20");
  if (n_labeled < 1 || n_unlabeled < 1) throw Error("synthetic corpus: sizes must be >= 1");
  if (shape.min_length < 1 || shape.max_length < shape.min_length) {
    throw Error("synthetic corpus: invalid document length range");
  }

  // Term i has Zipf weight 1/(i+1)^s; a random subset leans towards one class.
  Rng polarity_rng(derive_seed(seed, {0}));
  Generator gen;
  gen.shape = &shape;
  gen.positive.cumulative.resize(vocab_size);
  gen.negative.cumulative.resize(vocab_size);
  double pos_total = 0.0;
  double neg_total = 0.0;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    const double u = polarity_rng.uniform01();
    const double polarity = u < shape.polar_fraction / 2 ? 1.0 : (u < shape.polar_fraction ? -1.0 : 0.0);
    const double base = 1.0 / std::pow(static_cast<double>(i + 1), shape.zipf_exponent);
    pos_total += base * std::exp(shape.polarity_shift * polarity);
    neg_total += base * std::exp(-shape.polarity_shift * polarity);
    gen.positive.cumulative[i] = pos_total;
    gen.negative.cumulative[i] = neg_total;
  }

  SyntheticBilingual out;
  out.source_labeled = gen.make(derive_seed(seed, {1}), n_labeled, true, "s_", "source", "sl-");
  out.source_unlabeled = gen.make(derive_seed(seed, {2}), n_unlabeled, false, "s_", "source", "su-");
  out.target_unlabeled = gen.make(derive_seed(seed, {3}), n_unlabeled, false, "t_", "target", "tu-");
  out.target_test = gen.make(derive_seed(seed, {4}), n_labeled, true, "t_", "target", "tt-");
  out.dictionary.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    out.dictionary.push_back({"s_" + std::to_string(i), "t_" + std::to_string(i)});
  }
  return out;
}

}  // namespace cltq
