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

#ifndef CLTQ_LEARNER_HPP_
#define CLTQ_LEARNER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cltq/corpus.hpp"

namespace cltq {

enum class Loss { kHinge, kLogistic };

// HARD models come from the hinge loss, SOFT models from the logistic loss.
enum class ClassifierKind { kHard, kSoft };

std::string_view loss_name(Loss loss);

struct TrainConfig {
  Loss loss = Loss::kLogistic;
  double c = 1.0;              // inverse regularization strength
  double elastic_alpha = 0.0;  // L1 share of the penalty
  int max_iterations = 10000;
  double tolerance = 1e-6;  // on the norm of the proximal gradient mapping
  // Width of the quadratic zone of the smoothed hinge.
  double hinge_smoothing = 0.1;
};

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  ClassifierKind kind = ClassifierKind::kSoft;
  Loss loss = Loss::kLogistic;
  double reg_strength = 1.0;
  double elastic_alpha = 0.0;
  int iterations = 0;
  bool converged = false;

  // w.x + b. Throws cltq::Error on a dimension mismatch.
  double margin(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

// Minimizes
//   (1/n) sum_i loss(y_i, w.x_i + b) + (1/C) [alpha |w|_1 + (1 - alpha)/2 |w|_2^2]
// with accelerated proximal gradient (FISTA, gradient-based restart); the
// bias is not penalized. Rows of `x` are examples. Deterministic.
// Throws cltq::Error on single-class labels, non-finite features, C <= 0,
// alpha outside [0, 1] or mismatched sizes.
LinearModel train(const Eigen::MatrixXd& x, std::span<const Label> labels, const TrainConfig& config,
                  const LinearModel* warm_start = nullptr);

// The objective above and the gradient of its differentiable part (the L1 term
// excluded), as a vector (dw..., db). Exposed for verification.
double training_objective(const Eigen::VectorXd& weights, double bias, const Eigen::MatrixXd& x,
                          std::span<const Label> labels, const TrainConfig& config);
Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& weights, double bias, const Eigen::MatrixXd& x,
                                std::span<const Label> labels, const TrainConfig& config);

double sigmoid(double z);

// 1 iff margin > 0 (a zero margin is negative).
int predict_hard(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
// sigmoid(margin).
double predict_soft(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

// Fold index per example. Each class is shuffled with its own stream of
// `seed` and dealt round-robin, so per-class fold sizes differ by at most 1.
// Throws cltq::Error when a class has fewer than k examples.
std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

// {1e-5, 1e-4, ..., 1e5}.
std::vector<double> regularization_grid();

struct GridSearchResult {
  double best_c = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_accuracy;  // parallel to grid
};

// Stratified k-fold search over regularization_grid() maximizing the mean
// held-out accuracy; ties go to the smaller C. Along the grid each fold is
// warm-started from the previous C. `base.c` is ignored.
GridSearchResult grid_search_c(const Eigen::MatrixXd& x, std::span<const Label> labels, const TrainConfig& base,
                               std::size_t folds, std::uint64_t seed, std::size_t jobs = 1);

// Held-out outputs of a stratified k-fold run: the hard decision of the hard
// model and the posterior of the soft model, both trained without the fold.
struct CvPredictions {
  std::vector<std::uint8_t> hard;
  std::vector<double> soft;
  std::vector<Label> labels;
  std::vector<std::size_t> fold;
};

CvPredictions cross_val_predictions(const Eigen::MatrixXd& x, std::span<const Label> labels,
                                    const TrainConfig& hard_config, const TrainConfig& soft_config,
                                    std::size_t folds, std::uint64_t seed, std::size_t jobs = 1);

}  // namespace cltq

#endif  // CLTQ_LEARNER_HPP_
