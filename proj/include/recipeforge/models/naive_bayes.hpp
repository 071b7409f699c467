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

#ifndef RECIPEFORGE_MODELS_NAIVE_BAYES_HPP_
#define RECIPEFORGE_MODELS_NAIVE_BAYES_HPP_

#include <vector>

#include "recipeforge/models/common.hpp"

namespace recipeforge {

// Multinomial naive Bayes with additive smoothing.
class NaiveBayesModel {
 public:
  NaiveBayesModel() = default;

  // Throws kValidation on an empty training set or alpha <= 0.
  static NaiveBayesModel Train(const VectorDataset& data, double alpha = 1.0);

  // Posterior over the nine genres, computed in log space. Genres absent
  // from training get probability 0.
  Probabilities PredictProba(const CountVector& x) const;

  double alpha() const { return alpha_; }
  std::size_t vocab_size() const { return vocab_size_; }
  // -inf for genres without training examples.
  const std::array<double, kGenreCount>& log_prior() const {
    return log_prior_;
  }
  double LogLikelihood(Genre g, TermId term) const {
    return log_likelihood_[GenreIndex(g) * vocab_size_ + term];
  }

  // Raw parameter access for serialization.
  const std::vector<double>& log_likelihood() const { return log_likelihood_; }
  static NaiveBayesModel FromParameters(double alpha, std::size_t vocab_size,
                                        std::array<double, kGenreCount> prior,
                                        std::vector<double> likelihood);

  friend bool operator==(const NaiveBayesModel&, const NaiveBayesModel&) = default;

 private:
  double alpha_ = 1.0;
  std::size_t vocab_size_ = 0;
  std::array<double, kGenreCount> log_prior_{};
  std::vector<double> log_likelihood_;  // genre-major, kGenreCount x V
};

}  // namespace recipeforge

#endif  // RECIPEFORGE_MODELS_NAIVE_BAYES_HPP_
