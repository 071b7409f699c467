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

#include "recipeforge/models/naive_bayes.hpp"

#include <cmath>
#include <limits>

#include "recipeforge/error.hpp"

namespace recipeforge {

NaiveBayesModel NaiveBayesModel::Train(const VectorDataset& data, double alpha) {
  data.Validate();
  if (!(alpha > 0.0)) Fail(ErrorKind::kValidation, "smoothing alpha must be positive");
  const std::size_t v = data.dim;
  std::array<double, kGenreCount> docs{};
  std::array<double, kGenreCount> totals{};
  std::vector<double> counts(kGenreCount * v, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int g = GenreIndex(data.labels[i]);
    docs[g] += 1.0;
    for (const auto& [id, c] : data.inputs[i].entries) {
      counts[g * v + id] += c;
      totals[g] += c;
    }
  }
  NaiveBayesModel m;
  m.alpha_ = alpha;
  m.vocab_size_ = v;
  m.log_likelihood_.assign(kGenreCount * v, 0.0);
  const double n = static_cast<double>(data.size());
  for (int g = 0; g < kGenreCount; ++g) {
    m.log_prior_[g] = docs[g] > 0 ? std::log(docs[g] / n)
                                  : -std::numeric_limits<double>::infinity();
    const double denom = std::log(totals[g] + alpha * static_cast<double>(v));
    for (std::size_t t = 0; t < v; ++t) {
      m.log_likelihood_[g * v + t] = std::log(counts[g * v + t] + alpha) - denom;
    }
  }
  return m;
}

Probabilities NaiveBayesModel::PredictProba(const CountVector& x) const {
  std::array<double, kGenreCount> log_post{};
  double best = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < kGenreCount; ++g) {
    double s = log_prior_[g];
    if (std::isfinite(s)) {
      for (const auto& [id, c] : x.entries) {
        if (id < 0 || static_cast<std::size_t>(id) >= vocab_size_) {
          Fail(ErrorKind::kValidation, "feature index " + std::to_string(id) +
                                           " outside model vocabulary of size " +
                                           std::to_string(vocab_size_));
        }
        s += c * log_likelihood_[g * vocab_size_ + id];
      }
    }
    log_post[g] = s;
    if (s > best) best = s;
  }
  Probabilities p{};
  double z = 0.0;
  for (int g = 0; g < kGenreCount; ++g) {
    p[g] = std::isfinite(log_post[g]) ? std::exp(log_post[g] - best) : 0.0;
    z += p[g];
  }
  for (double& v : p) v /= z;
  return p;
}

NaiveBayesModel NaiveBayesModel::FromParameters(double alpha, std::size_t vocab_size,
                                                std::array<double, kGenreCount> prior,
                                                std::vector<double> likelihood) {
  if (likelihood.size() != kGenreCount * vocab_size) {
    Fail(ErrorKind::kFormat, "naive Bayes parameter block has the wrong size");
  }
  NaiveBayesModel m;
  m.alpha_ = alpha;
  m.vocab_size_ = vocab_size;
  m.log_prior_ = prior;
  m.log_likelihood_ = std::move(likelihood);
  return m;
}

}  // namespace recipeforge
