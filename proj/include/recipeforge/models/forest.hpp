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

#ifndef RECIPEFORGE_MODELS_FOREST_HPP_
#define RECIPEFORGE_MODELS_FOREST_HPP_

#include <cstdint>
#include <vector>

#include "recipeforge/models/common.hpp"

namespace recipeforge {

struct ForestConfig {
  std::size_t trees = 50;
  std::size_t max_depth = 12;
  // Features examined per split; 0 means ceil(sqrt(V)).
  std::size_t max_features = 0;
  bool bootstrap = true;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
};

struct TreeNode {
  // Internal nodes: x[feature] <= threshold goes left.
  std::int64_t feature = -1;
  double threshold = 0.0;
  std::int64_t left = -1;
  std::int64_t right = -1;
  // Leaves: training sample counts per genre.
  std::array<double, kGenreCount> histogram{};

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at 0

  const TreeNode& Leaf(const CountVector& x) const;
  std::size_t Depth() const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

// Bagged CART trees with Gini splits and per-split feature subsampling.
class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::size_t dim, std::vector<DecisionTree> trees)
      : dim_(dim), trees_(std::move(trees)) {}

  static ForestModel Train(const VectorDataset& data, const ForestConfig& cfg);

  // Mean of the normalized leaf histograms.
  Probabilities PredictProba(const CountVector& x) const;

  std::size_t dim() const { return dim_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  friend bool operator==(const ForestModel&, const ForestModel&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<DecisionTree> trees_;
};

}  // namespace recipeforge

#endif  // RECIPEFORGE_MODELS_FOREST_HPP_
