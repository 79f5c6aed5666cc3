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

#include "cltq/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cltq/error.hpp"
#include "cltq/parallel.hpp"
#include "cltq/random.hpp"

namespace cltq {
namespace {

Eigen::VectorXd signed_labels(std::span<const Label> labels) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = labels[i] == Label::kPositive ? 1.0 : -1.0;
  }
  return y;
}

// Loss as a function of the signed margin a = y z, and its derivative.
double loss_value(Loss loss, double a, double smoothing) {
  if (loss == Loss::kLogistic) return a > 0.0 ? std::log1p(std::exp(-a)) : -a + std::log1p(std::exp(a));
  if (a >= 1.0) return 0.0;
  if (a > 1.0 - smoothing) return (1.0 - a) * (1.0 - a) / (2.0 * smoothing);
  return 1.0 - a - 0.5 * smoothing;
}

double loss_derivative(Loss loss, double a, double smoothing) {
  if (loss == Loss::kLogistic) return -sigmoid(-a);
  if (a >= 1.0) return 0.0;
  if (a > 1.0 - smoothing) return -(1.0 - a) / smoothing;
  return -1.0;
}

double loss_curvature(const TrainConfig& config) {
  return config.loss == Loss::kLogistic ? 0.25 : 1.0 / config.hinge_smoothing;
}

void validate(const Eigen::MatrixXd& x, std::span<const Label> labels, const TrainConfig& config) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw Error("train: " + std::to_string(x.rows()) + " vectors but " + std::to_string(labels.size()) +
                " labels");
  }
  if (!(config.c > 0.0) || !std::isfinite(config.c)) throw Error("train: C must be positive and finite");
  if (!(config.elastic_alpha >= 0.0 && config.elastic_alpha <= 1.0)) {
    throw Error("train: elastic_alpha must lie in [0, 1]");
  }
  if (config.loss == Loss::kHinge && !(config.hinge_smoothing > 0.0)) {
    throw Error("train: hinge_smoothing must be positive");
  }
  const auto pos = std::count(labels.begin(), labels.end(), Label::kPositive);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size())) {
    throw Error("train: labels contain a single class");
  }
  if (!x.allFinite()) throw Error("train: non-finite feature value");
}

// Largest eigenvalue of [X 1]^T [X 1].
double augmented_spectral_norm(const Eigen::MatrixXd& x) {
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd gram(d + 1, d + 1);
  gram.topLeftCorner(d, d).noalias() = x.transpose() * x;
  const Eigen::VectorXd colsum = x.colwise().sum().transpose();
  gram.topRightCorner(d, 1) = colsum;
  gram.bottomLeftCorner(1, d) = colsum.transpose();
  gram(d, d) = static_cast<double>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

LinearModel fista(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainConfig& config,
                  double spectral, const LinearModel* warm_start) {
  const Eigen::Index d = x.cols();
  const double n = static_cast<double>(x.rows());
  const double l2 = (1.0 - config.elastic_alpha) / config.c;
  const double l1 = config.elastic_alpha / config.c;
  const double lipschitz = loss_curvature(config) * spectral / n + l2;
  const double step = 1.0 / lipschitz;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  if (warm_start != nullptr && warm_start->weights.size() == d) {
    w = warm_start->weights;
    b = warm_start->bias;
  }
  Eigen::VectorXd look_w = w;
  double look_b = b;
  Eigen::VectorXd z(x.rows());
  Eigen::VectorXd r(x.rows());
  Eigen::VectorXd next_w(d);
  double t = 1.0;

  LinearModel model;
  model.kind = config.loss == Loss::kHinge ? ClassifierKind::kHard : ClassifierKind::kSoft;
  model.loss = config.loss;
  model.reg_strength = config.c;
  model.elastic_alpha = config.elastic_alpha;

  int it = 0;
  for (; it < config.max_iterations; ++it) {
    z.noalias() = x * look_w;
    z.array() += look_b;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      r(i) = y(i) * loss_derivative(config.loss, y(i) * z(i), config.hinge_smoothing) / n;
    }
    next_w.noalias() = x.transpose() * r;
    next_w += l2 * look_w;
    const double grad_b = r.sum();
    next_w = look_w - step * next_w;
    if (l1 > 0.0) {
      const double thr = step * l1;
      for (Eigen::Index j = 0; j < d; ++j) next_w(j) = soft_threshold(next_w(j), thr);
    }
    const double next_b = look_b - step * grad_b;

    const double mapping = lipschitz * std::sqrt((look_w - next_w).squaredNorm() +
                                                 (look_b - next_b) * (look_b - next_b));
    // Restart the momentum when it points against the last step.
    const bool restart = (look_w - next_w).dot(next_w - w) + (look_b - next_b) * (next_b - b) > 0.0;
    const double t_next = restart ? 1.0 : 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = restart ? 0.0 : (t - 1.0) / t_next;
    look_w = next_w + momentum * (next_w - w);
    look_b = next_b + momentum * (next_b - b);
    w.swap(next_w);
    b = next_b;
    t = t_next;
    if (!std::isfinite(mapping)) throw Error("train: diverged");
    if (mapping <= config.tolerance) {
      model.converged = true;
      ++it;
      break;
    }
  }
  model.weights = std::move(w);
  model.bias = b;
  model.iterations = it;
  return model;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows) {
  return x(rows, Eigen::all);
}

struct FoldSplit {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
  std::vector<Label> train_labels;
};

FoldSplit split_fold(std::span<const Label> labels, const std::vector<std::size_t>& fold_of, std::size_t f) {
  FoldSplit s;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (fold_of[i] == f) {
      s.test.push_back(static_cast<Eigen::Index>(i));
    } else {
      s.train.push_back(static_cast<Eigen::Index>(i));
      s.train_labels.push_back(labels[i]);
    }
  }
  return s;
}

}  // namespace

std::string_view loss_name(Loss loss) { return loss == Loss::kHinge ? "hinge" : "logistic"; }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LinearModel::margin(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != weights.size()) {
    throw Error("model expects " + std::to_string(weights.size()) + " features, got " +
                std::to_string(x.size()));
  }
  return weights.dot(x) + bias;
}

int predict_hard(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.margin(x) > 0.0 ? 1 : 0;
}

double predict_soft(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return sigmoid(model.margin(x));
}

LinearModel train(const Eigen::MatrixXd& x, std::span<const Label> labels, const TrainConfig& config,
                  const LinearModel* warm_start) {
  validate(x, labels, config);
  return fista(x, signed_labels(labels), config, augmented_spectral_norm(x), warm_start);
}

double training_objective(const Eigen::VectorXd& weights, double bias, const Eigen::MatrixXd& x,
                          std::span<const Label> labels, const TrainConfig& config) {
  const Eigen::VectorXd y = signed_labels(labels);
  const Eigen::VectorXd z = (x * weights).array() + bias;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += loss_value(config.loss, y(i) * z(i), config.hinge_smoothing);
  const double n = static_cast<double>(x.rows());
  return sum / n + (config.elastic_alpha * weights.lpNorm<1>() +
                    0.5 * (1.0 - config.elastic_alpha) * weights.squaredNorm()) /
                       config.c;
}

Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& weights, double bias, const Eigen::MatrixXd& x,
                                std::span<const Label> labels, const TrainConfig& config) {
  const Eigen::VectorXd y = signed_labels(labels);
  const Eigen::VectorXd z = (x * weights).array() + bias;
  const double n = static_cast<double>(x.rows());
  Eigen::VectorXd r(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    r(i) = y(i) * loss_derivative(config.loss, y(i) * z(i), config.hinge_smoothing) / n;
  }
  Eigen::VectorXd g(weights.size() + 1);
  g.head(weights.size()) = x.transpose() * r + (1.0 - config.elastic_alpha) / config.c * weights;
  g(weights.size()) = r.sum();
  return g;
}

std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_folds: need at least 2 folds");
  std::vector<std::size_t> fold(labels.size(), 0);
  for (Label cls : {Label::kNegative, Label::kPositive}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (members.size() < k) {
      throw Error("stratified_folds: class " + std::string(label_name(cls)) + " has " +
                  std::to_string(members.size()) + " examples, fewer than " + std::to_string(k) + " folds");
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(cls)}));
    rng.shuffle(members.begin(), members.end());
    for (std::size_t p = 0; p < members.size(); ++p) fold[members[p]] = p % k;
  }
  return fold;
}

std::vector<double> regularization_grid() {
  std::vector<double> grid;
  for (int e = -5; e <= 5; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

GridSearchResult grid_search_c(const Eigen::MatrixXd& x, std::span<const Label> labels, const TrainConfig& base,
                               std::size_t folds, std::uint64_t seed, std::size_t jobs) {
  validate(x, labels, base);
  const std::vector<std::size_t> fold_of = stratified_folds(labels, folds, seed);
  GridSearchResult result;
  result.grid = regularization_grid();
  const std::size_t g = result.grid.size();

  // accuracy[f * g + c]
  std::vector<double> accuracy(folds * g, 0.0);
  parallel_for(folds, jobs, [&](std::size_t f) {
    const FoldSplit split = split_fold(labels, fold_of, f);
    const Eigen::MatrixXd train_x = select_rows(x, split.train);
    const Eigen::MatrixXd test_x = select_rows(x, split.test);
    const Eigen::VectorXd y = signed_labels(split.train_labels);
    const double spectral = augmented_spectral_norm(train_x);
    LinearModel previous;
    for (std::size_t c = 0; c < g; ++c) {
      TrainConfig config = base;
      config.c = result.grid[c];
      LinearModel model = fista(train_x, y, config, spectral, c == 0 ? nullptr : &previous);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        const int decision = predict_hard(model, test_x.row(static_cast<Eigen::Index>(i)).transpose());
        correct += decision == (labels[static_cast<std::size_t>(split.test[i])] == Label::kPositive ? 1 : 0);
      }
      accuracy[f * g + c] = static_cast<double>(correct) / static_cast<double>(split.test.size());
      previous = std::move(model);
    }
  });

  result.mean_accuracy.assign(g, 0.0);
  for (std::size_t c = 0; c < g; ++c) {
    double sum = 0.0;
    for (std::size_t f = 0; f < folds; ++f) sum += accuracy[f * g + c];
    result.mean_accuracy[c] = sum / static_cast<double>(folds);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < g; ++c) {
    if (result.mean_accuracy[c] > result.mean_accuracy[best]) best = c;
  }
  result.best_c = result.grid[best];
  return result;
}

CvPredictions cross_val_predictions(const Eigen::MatrixXd& x, std::span<const Label> labels,
                                    const TrainConfig& hard_config, const TrainConfig& soft_config,
                                    std::size_t folds, std::uint64_t seed, std::size_t jobs) {
  validate(x, labels, hard_config);
  validate(x, labels, soft_config);
  CvPredictions out;
  out.fold = stratified_folds(labels, folds, seed);
  out.labels.assign(labels.begin(), labels.end());
  out.hard.assign(labels.size(), 0);
  out.soft.assign(labels.size(), 0.0);
  parallel_for(folds, jobs, [&](std::size_t f) {
    const FoldSplit split = split_fold(labels, out.fold, f);
    const Eigen::MatrixXd train_x = select_rows(x, split.train);
    const LinearModel hard = train(train_x, split.train_labels, hard_config);
    const LinearModel soft = train(train_x, split.train_labels, soft_config);
    for (Eigen::Index i : split.test) {
      const Eigen::VectorXd row = x.row(i).transpose();
      out.hard[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(predict_hard(hard, row));
      out.soft[static_cast<std::size_t>(i)] = predict_soft(soft, row);
    }
  });
  return out;
}

}  // namespace cltq
