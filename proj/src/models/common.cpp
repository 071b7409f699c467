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

#include "recipeforge/models/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recipeforge/error.hpp"
#include "recipeforge/random.hpp"

namespace recipeforge {

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    Fail(ErrorKind::kValidation, "learning rate must be positive");
  }
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    Fail(ErrorKind::kValidation, "warmup fraction must lie in [0, 1)");
  }
  if (batch_size < 1) Fail(ErrorKind::kValidation, "batch size must be at least 1");
  if (!(weight_decay >= 0.0)) Fail(ErrorKind::kValidation, "weight decay must be non-negative");
}

TrainConfig LinearTrainDefaults() { return TrainConfig{}; }

TrainConfig MlpTrainDefaults() {
  TrainConfig cfg;
  cfg.learning_rate = 1e-5;
  return cfg;
}

TrainConfig CommitteeTrainDefaults() {
  TrainConfig c;
  c.learning_rate = 1.0;
  c.batch_size = 8;
  c.epochs = 100;
  c.weight_decay = 0.0;
  return c;
}

WarmupLinearSchedule::WarmupLinearSchedule(double peak, std::size_t total_steps,
                                           double warmup_fraction)
    : peak_(peak),
      total_steps_(total_steps),
      warmup_steps_(static_cast<std::size_t>(
          std::floor(warmup_fraction * static_cast<double>(total_steps)))) {}

double WarmupLinearSchedule::Rate(std::size_t step) const {
  if (total_steps_ == 0 || step == 0 || step > total_steps_) return 0.0;
  if (step <= warmup_steps_) {
    return peak_ * static_cast<double>(step) / static_cast<double>(warmup_steps_);
  }
  return peak_ * static_cast<double>(total_steps_ - step) /
         static_cast<double>(total_steps_ - warmup_steps_);
}

void VectorDataset::Validate() const {
  if (labels.empty()) Fail(ErrorKind::kValidation, "empty training set");
  if (inputs.size() != labels.size()) {
    Fail(ErrorKind::kValidation, "inputs and labels differ in length");
  }
  for (const CountVector& x : inputs) {
    for (const auto& [id, count] : x.entries) {
      if (id < 0 || static_cast<std::size_t>(id) >= dim) {
        Fail(ErrorKind::kValidation, "feature index " + std::to_string(id) +
                                         " outside vocabulary of size " + std::to_string(dim));
      }
    }
  }
}

void SequenceDataset::Validate() const {
  if (labels.empty()) Fail(ErrorKind::kValidation, "empty training set");
  if (inputs.size() != labels.size()) {
    Fail(ErrorKind::kValidation, "inputs and labels differ in length");
  }
  const std::size_t len = inputs.front().size();
  for (const TokenSequence& s : inputs) {
    if (s.size() != len) Fail(ErrorKind::kValidation, "sequences differ in length");
    for (TermId id : s) {
      if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
        Fail(ErrorKind::kValidation, "token id " + std::to_string(id) + " outside vocabulary");
      }
    }
  }
}

std::vector<std::vector<std::size_t>> EpochBatches(std::size_t n, std::size_t batch_size,
                                                   std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(seed, streams::kShuffle, epoch));
  rng.Shuffle(order);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t lo = 0; lo < n; lo += batch_size) {
    const std::size_t hi = std::min(n, lo + batch_size);
    batches.emplace_back(order.begin() + lo, order.begin() + hi);
  }
  return batches;
}

Probabilities Softmax(std::span<const double> scores) {
  Probabilities p{};
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (std::size_t g = 0; g < p.size(); ++g) {
    p[g] = std::exp(scores[g] - m);
    z += p[g];
  }
  for (double& v : p) v /= z;
  return p;
}

Genre PredictGenre(std::span<const double> scores) {
  if (scores.size() != static_cast<std::size_t>(kGenreCount)) {
    Fail(ErrorKind::kValidation, "expected 9 scores, got " + std::to_string(scores.size()));
  }
  std::size_t best = 0;
  for (std::size_t g = 0; g < scores.size(); ++g) {
    if (!std::isfinite(scores[g])) Fail(ErrorKind::kNumeric, "non-finite genre score");
    if (scores[g] > scores[best]) best = g;
  }
  return GenreFromIndex(static_cast<int>(best));
}

}  // namespace recipeforge
