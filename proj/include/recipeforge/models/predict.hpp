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

#ifndef RECIPEFORGE_MODELS_PREDICT_HPP_
#define RECIPEFORGE_MODELS_PREDICT_HPP_

#include <string_view>

#include "recipeforge/models/model_io.hpp"

namespace recipeforge {

// Genre probabilities for raw feature text: count-vector models vectorize the
// text, the neural model encodes it as a token sequence of `max_len`.
Probabilities PredictText(const AnyModel& model, std::string_view text, const Vocabulary& vocab,
                          std::size_t max_len);

Probabilities PredictVector(const AnyModel& model, const CountVector& x);

}  // namespace recipeforge

#endif  // RECIPEFORGE_MODELS_PREDICT_HPP_
