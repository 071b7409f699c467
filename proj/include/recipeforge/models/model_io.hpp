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

#ifndef RECIPEFORGE_MODELS_MODEL_IO_HPP_
#define RECIPEFORGE_MODELS_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "recipeforge/models/forest.hpp"
#include "recipeforge/models/linear.hpp"
#include "recipeforge/models/mlp.hpp"
#include "recipeforge/models/naive_bayes.hpp"

namespace recipeforge {

enum class ModelKind : std::uint32_t {
  kNaiveBayes = 1,
  kLogReg = 2,
  kSvm = 3,
  kMlp = 4,
  kForest = 5,
};

std::string_view ModelKindName(ModelKind kind);
// "nb", "logreg", "svm", "mlp", "forest" (and a few long aliases).
std::optional<ModelKind> ModelKindFromName(std::string_view name);

using AnyModel =
    std::variant<NaiveBayesModel, LinearModel, MlpModel, ForestModel>;

ModelKind KindOf(const AnyModel& model);
std::size_t InputDim(const AnyModel& model);

// Binary container: "RFMODEL\0", u32 version, u32 kind, u64 V, u64 genre
// count, then the per-kind payload. Integers and IEEE-754 doubles are
// little-endian regardless of host order.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void WriteModel(const AnyModel& model, std::ostream& out);
AnyModel ReadModel(std::istream& in);
void SaveModel(const AnyModel& model, const std::filesystem::path& path);
AnyModel LoadModel(const std::filesystem::path& path);

// Human-readable sidecar text.
std::string ModelSummary(const AnyModel& model);

}  // namespace recipeforge

#endif  // RECIPEFORGE_MODELS_MODEL_IO_HPP_
