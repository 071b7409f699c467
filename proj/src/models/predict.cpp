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

#include "recipeforge/models/predict.hpp"

#include "recipeforge/error.hpp"

namespace recipeforge {

Probabilities PredictVector(const AnyModel& model, const CountVector& x) {
  return std::visit(
      [&](const auto& m) -> Probabilities {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MlpModel>) {
          Fail(ErrorKind::kValidation, "the neural model takes token sequences, not count vectors");
        } else {
          return m.PredictProba(x);
        }
      },
      model);
}

Probabilities PredictText(const AnyModel& model, std::string_view text, const Vocabulary& vocab,
                          std::size_t max_len) {
  if (InputDim(model) != vocab.size()) {
    Fail(ErrorKind::kValidation, "model vocabulary size " + std::to_string(InputDim(model)) +
                                     " does not match vocabulary file size " +
                                     std::to_string(vocab.size()));
  }
  if (const auto* mlp = std::get_if<MlpModel>(&model)) {
    return mlp->PredictProba(EncodeSequence(text, vocab, max_len));
  }
  return PredictVector(model, Vectorize(text, vocab));
}

}  // namespace recipeforge
