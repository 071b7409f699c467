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

#ifndef RECIPEFORGE_MODELS_MLP_HPP_
#define RECIPEFORGE_MODELS_MLP_HPP_

#include <span>
#include <vector>

#include "recipeforge/models/common.hpp"

namespace recipeforge {

struct MlpShape {
  std::size_t vocab_size = 0;
  std::size_t embedding_dim = 64;
  std::vector<std::size_t> hidden = {128};

  friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

// Embedding-mean feedforward classifier over token sequences:
// mean of non-[PAD] embeddings -> rectifier layers -> nine logits.
//
// All parameters live in one flat vector. Layout: embedding table
// (vocab x dim, row per token), then per hidden layer its weight matrix
// (out x in, row-major) followed by its bias, then the output layer
// (9 x last) and its bias.
class MlpModel {
 public:
  MlpModel() = default;
  explicit MlpModel(MlpShape shape);  // all parameters zero

  // Embeddings and hidden weights drawn from scaled normals, biases and the
  // output layer zero, so an untrained model predicts uniformly.
  static MlpModel Initialize(MlpShape shape, std::uint64_t seed);

  const MlpShape& shape() const { return shape_; }
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  std::array<double, kGenreCount> Logits(const TokenSequence& seq) const;
  // A sequence without any non-[PAD] token yields the uniform distribution.
  Probabilities PredictProba(const TokenSequence& seq) const;

  // Offsets into parameters().
  std::size_t embedding_offset() const { return 0; }
  std::size_t layer_weight_offset(std::size_t layer) const;
  std::size_t layer_bias_offset(std::size_t layer) const;
  // Layer `hidden.size()` is the output layer.
  std::size_t layer_inputs(std::size_t layer) const;
  std::size_t layer_outputs(std::size_t layer) const;
  std::size_t layer_count() const { return shape_.hidden.size() + 1; }

  friend bool operator==(const MlpModel&, const MlpModel&) = default;

 private:
  MlpShape shape_;
  std::vector<double> params_;
  std::vector<std::size_t> weight_offsets_;
  std::vector<std::size_t> bias_offsets_;
};

struct MlpGradient {
  double loss = 0.0;              // mean cross-entropy
  std::vector<double> gradient;   // same layout as parameters()
};

MlpGradient MlpLossGradient(const MlpModel& model,
                            std::span<const TokenSequence> inputs,
                            std::span<const Genre> labels);

MlpModel TrainMlp(const SequenceDataset& data, const TrainConfig& cfg,
                  const MlpShape& shape, TrainLog* log = nullptr);

}  // namespace recipeforge

#endif  // RECIPEFORGE_MODELS_MLP_HPP_
