/*
 * Copyright 2026 The RecipeForge Authors.
 *
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

#ifndef RECIPEFORGE_MODELS_LINEAR_HPP_
#define RECIPEFORGE_MODELS_LINEAR_HPP_

#include <span>
#include <utility>
#include <vector>

#include "recipeforge/models/common.hpp"

namespace recipeforge {

enum class LinearKind { kSoftmaxRegression, kOvrHinge };

// Nine-row linear scorer: score_g(x) = w_g . x + b_g.
class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(LinearKind kind, std::size_t dim);

  LinearKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  std::array<double, kGenreCount> Scores(const CountVector& x) const;
  // kSoftmaxRegression: softmax over scores. kOvrHinge: per-genre Platt
  // sigmoids sigma(a_g * margin_g + b_g), normalized to sum to 1.
  Probabilities PredictProba(const CountVector& x) const;

  double& Weight(int genre_index, TermId term) {
    return weights_[genre_index * dim_ + term];
  }
  double Weight(int genre_index, TermId term) const {
    return weights_[genre_index * dim_ + term];
  }
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  std::array<double, kGenreCount>& bias() { return bias_; }
  const std::array<double, kGenreCount>& bias() const { return bias_; }
  // Platt parameters (kOvrHinge only); a = 1, b = 0 until calibrated.
  std::array<double, kGenreCount>& platt_a() { return platt_a_; }
  const std::array<double, kGenreCount>& platt_a() const { return platt_a_; }
  std::array<double, kGenreCount>& platt_b() { return platt_b_; }
  const std::array<double, kGenreCount>& platt_b() const { return platt_b_; }

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  LinearKind kind_ = LinearKind::kSoftmaxRegression;
  std::size_t dim_ = 0;
  std::vector<double> weights_;  // genre-major, kGenreCount x dim
  std::array<double, kGenreCount> bias_{};
  std::array<double, kGenreCount> platt_a_{1, 1, 1, 1, 1, 1, 1, 1, 1};
  std::array<double, kGenreCount> platt_b_{};
};

// Mean data loss over a batch and its gradient (same layout as the model).
struct LinearGradient {
  double loss = 0.0;
  std::vector<double> weights;
  std::array<double, kGenreCount> bias{};
};

// Mean categorical cross-entropy of softmax(scores).
LinearGradient SoftmaxLossGradient(const LinearModel& model,
                                   std::span<const CountVector> inputs,
                                   std::span<const Genre> labels);

// Sum over genres of the mean binary hinge loss max(0, 1 - y_g * score_g)
// with y_g = +1 for the gold genre and -1 otherwise. Subgradient 0 is used at
// the hinge point.
LinearGradient HingeLossGradient(const LinearModel& model,
                                 std::span<const CountVector> inputs,
                                 std::span<const Genre> labels);

// Mini-batch gradient descent with decoupled weight decay (biases are not
// decayed) under the warmup/linear-decay schedule. Weights start at zero.
// Throws kNumeric when the loss becomes non-finite.
LinearModel TrainLogReg(const VectorDataset& data, const TrainConfig& cfg,
                        TrainLog* log = nullptr);
// TrainSvm ends with CalibrateSvm on the training margins.
LinearModel TrainSvm(const VectorDataset& data, const TrainConfig& cfg,
                     TrainLog* log = nullptr);

// Fits one sigmoid per genre to the one-vs-rest margins (Platt's method with
// smoothed targets, Newton iterations with backtracking).
void CalibrateSvm(LinearModel& model, const VectorDataset& data);

// Platt fit for one binary problem: returns (a, b) with
// P(positive | f) = sigma(a * f + b).
std::pair<double, double> FitPlatt(std::span<const double> margins,
                                   std::span<const bool> positive);

}  // namespace recipeforge

#endif  // RECIPEFORGE_MODELS_LINEAR_HPP_
