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

#include "recipeforge/models/forest.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "recipeforge/error.hpp"
#include "recipeforge/random.hpp"

namespace recipeforge {
namespace {

using Histogram = std::array<double, kGenreCount>;

double Gini(const Histogram& h, double n) {
  if (n <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : h) s += c * c;
  return 1.0 - s / (n * n);
}

struct Split {
  std::int64_t feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child impurity
};

class TreeBuilder {
 public:
  TreeBuilder(const VectorDataset& data, const ForestConfig& cfg, std::size_t max_features,
              std::uint64_t seed)
      : data_(data), cfg_(cfg), max_features_(max_features), rng_(seed) {}

  DecisionTree Build(std::vector<std::size_t> samples) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    struct Work {
      std::size_t node;
      std::vector<std::size_t> samples;
      std::size_t depth;
    };
    std::vector<Work> stack;
    stack.push_back({0, std::move(samples), 0});
    while (!stack.empty()) {
      Work w = std::move(stack.back());
      stack.pop_back();
      Histogram hist{};
      for (std::size_t i : w.samples) hist[GenreIndex(data_.labels[i])] += 1.0;
      const bool pure =
          std::count_if(hist.begin(), hist.end(), [](double c) { return c > 0.0; }) <= 1;
      std::optional<Split> split;
      if (!pure && w.depth < cfg_.max_depth && w.samples.size() >= cfg_.min_samples_split) {
        split = BestSplit(w.samples);
      }
      if (!split) {
        tree.nodes[w.node].histogram = hist;
        continue;
      }
      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      for (std::size_t i : w.samples) {
        (data_.inputs[i].At(static_cast<TermId>(split->feature)) <= split->threshold ? left : right)
            .push_back(i);
      }
      const auto l = static_cast<std::int64_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[w.node];
      node.feature = split->feature;
      node.threshold = split->threshold;
      node.left = l;
      node.right = l + 1;
      // Right pushed first so the left subtree is expanded first.
      stack.push_back({static_cast<std::size_t>(l + 1), std::move(right), w.depth + 1});
      stack.push_back({static_cast<std::size_t>(l), std::move(left), w.depth + 1});
    }
    return tree;
  }

 private:
  // Examines features that are non-zero somewhere in the node, in a random
  // order, until max_features non-constant ones have been scored. All-zero
  // features can never separate the node and are skipped.
  std::optional<Split> BestSplit(const std::vector<std::size_t>& samples) {
    std::vector<TermId> candidates;
    for (std::size_t i : samples) {
      for (const auto& [id, c] : data_.inputs[i].entries) {
        if (c != 0.0) candidates.push_back(id);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    rng_.Shuffle(candidates);

    const double n = static_cast<double>(samples.size());
    std::optional<Split> best;
    std::size_t examined = 0;
    std::vector<std::pair<double, int>> column(samples.size());
    for (TermId feature : candidates) {
      if (examined >= max_features_) break;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const std::size_t i = samples[k];
        column[k] = {data_.inputs[i].At(feature), GenreIndex(data_.labels[i])};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;  // constant
      ++examined;
      Histogram left{};
      Histogram right{};
      for (const auto& [v, g] : column) right[g] += 1.0;
      for (std::size_t k = 0; k + 1 < column.size(); ++k) {
        left[column[k].second] += 1.0;
        right[column[k].second] -= 1.0;
        if (column[k].first == column[k + 1].first) continue;
        const double nl = static_cast<double>(k + 1);
        const double nr = n - nl;
        const double impurity = (nl * Gini(left, nl) + nr * Gini(right, nr)) / n;
        if (!best || impurity < best->impurity) {
          best = Split{feature, 0.5 * (column[k].first + column[k + 1].first), impurity};
        }
      }
    }
    return best;
  }

  const VectorDataset& data_;
  const ForestConfig& cfg_;
  std::size_t max_features_;
  Rng rng_;
};

}  // namespace

const TreeNode& DecisionTree::Leaf(const CountVector& x) const {
  std::size_t k = 0;
  while (!nodes[k].is_leaf()) {
    const TreeNode& n = nodes[k];
    k = static_cast<std::size_t>(x.At(static_cast<TermId>(n.feature)) <= n.threshold ? n.left
                                                                                      : n.right);
  }
  return nodes[k];
}

std::size_t DecisionTree::Depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    const auto [k, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[k].is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(nodes[k].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[k].right), d + 1);
    }
  }
  return deepest;
}

ForestModel ForestModel::Train(const VectorDataset& data, const ForestConfig& cfg) {
  data.Validate();
  if (cfg.trees == 0) Fail(ErrorKind::kValidation, "forest needs at least one tree");
  std::size_t max_features = cfg.max_features;
  if (max_features == 0) {
    max_features = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.dim))));
  }
  max_features = std::max<std::size_t>(1, std::min(max_features, data.dim));
  std::vector<DecisionTree> trees;
  trees.reserve(cfg.trees);
  for (std::size_t t = 0; t < cfg.trees; ++t) {
    const std::uint64_t seed = DeriveSeed(cfg.seed, streams::kForest, t);
    Rng bag(seed);
    std::vector<std::size_t> samples(data.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
      samples[k] = cfg.bootstrap ? static_cast<std::size_t>(bag.Below(data.size())) : k;
    }
    TreeBuilder builder(data, cfg, max_features, Mix64(seed));
    trees.push_back(builder.Build(std::move(samples)));
  }
  return ForestModel(data.dim, std::move(trees));
}

Probabilities ForestModel::PredictProba(const CountVector& x) const {
  Probabilities p{};
  for (const DecisionTree& tree : trees_) {
    const Histogram& h = tree.Leaf(x).histogram;
    double n = 0.0;
    for (double c : h) n += c;
    if (n <= 0.0) continue;
    for (int g = 0; g < kGenreCount; ++g) p[g] += h[g] / n;
  }
  double z = 0.0;
  for (double v : p) z += v;
  if (z <= 0.0) {
    p.fill(1.0 / kGenreCount);
    return p;
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace recipeforge
