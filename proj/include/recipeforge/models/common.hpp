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

#ifndef RECIPEFORGE_MODELS_COMMON_HPP_
#define RECIPEFORGE_MODELS_COMMON_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recipeforge/features.hpp"
#include "recipeforge/genre.hpp"

namespace recipeforge {

using Probabilities = std::array<double, kGenreCount>;

// Mini-batch training hyperparameters shared by the gradient-trained models.
struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t batch_size = 128;
  std::size_t epochs = 10;
  double warmup_fraction = 0.2;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;

  // Throws kValidation when a field is out of range.
  void Validate() const;
};

// Defaults for softmax regression and the linear SVM.
TrainConfig LinearTrainDefaults();
// Defaults for the neural model (fine-tuning scale learning rate).
TrainConfig MlpTrainDefaults();
// Committee members retrain on small labeled sets every round; batch 128 for
// 10 epochs would be a handful of steps there.
TrainConfig CommitteeTrainDefaults();

// Linear warmup from 0 to the peak rate over the first warmup steps, then
// linear decay to 0 at the final step. Steps are 1-based.
class WarmupLinearSchedule {
 public:
  WarmupLinearSchedule(double peak, std::size_t total_steps,
                       double warmup_fraction);

  double Rate(std::size_t step) const;
  std::size_t warmup_steps() const { return warmup_steps_; }
  std::size_t total_steps() const { return total_steps_; }

 private:
  double peak_;
  std::size_t total_steps_;
  std::size_t warmup_steps_;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
};

struct TrainLog {
  std::vector<double> step_rates;  // rate applied at each optimizer step
  std::vector<EpochRecord> epochs;
};

struct VectorDataset {
  std::vector<CountVector> inputs;
  std::vector<Genre> labels;
  std::size_t dim = 0;  // vocabulary size

  std::size_t size() const { return labels.size(); }
  // Throws kValidation on empty data, size mismatch or out-of-range indices.
  void Validate() const;
};

struct SequenceDataset {
  std::vector<TokenSequence> inputs;
  std::vector<Genre> labels;
  std::size_t vocab_size = 0;

  std::size_t size() const { return labels.size(); }
  void Validate() const;
};

// Batches of example positions for one epoch, shuffled under
// DeriveSeed(seed, kShuffle, epoch).
std::vector<std::vector<std::size_t>> EpochBatches(std::size_t n,
                                                   std::size_t batch_size,
                                                   std::uint64_t seed,
                                                   std::size_t epoch);

// Numerically stable softmax.
Probabilities Softmax(std::span<const double> scores);

// Argmax with ties broken toward the lowest genre id. Throws kNumeric on any
// non-finite entry and kValidation unless exactly nine scores are given.
Genre PredictGenre(std::span<const double> scores);

}  // namespace recipeforge

#endif  // RECIPEFORGE_MODELS_COMMON_HPP_
