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

#ifndef RECIPEFORGE_EVALUATION_HPP_
#define RECIPEFORGE_EVALUATION_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recipeforge/features.hpp"
#include "recipeforge/models/model_io.hpp"

namespace recipeforge {

// Rows are gold genres, columns predictions.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kGenreCount>, kGenreCount> counts{};

  std::size_t At(Genre gold, Genre pred) const {
    return counts[GenreIndex(gold)][GenreIndex(pred)];
  }
  std::size_t Total() const;
  std::size_t Trace() const;
  std::size_t RowSum(Genre gold) const;
  std::size_t ColumnSum(Genre pred) const;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix Confusion(std::span<const Genre> golds, std::span<const Genre> preds);

// 0/0 entries are reported as 0 with the matching flag cleared.
struct GenreScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = false;
  bool recall_defined = false;
  bool f1_defined = false;  // genre occurs in golds or predictions
  std::size_t support = 0;  // gold count
  friend bool operator==(const GenreScores&, const GenreScores&) = default;
};

struct PrfSummary {
  std::array<GenreScores, kGenreCount> per_genre{};
  // Means over the genres whose value is defined; 0 when none is.
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

PrfSummary PrecisionRecallF1(const ConfusionMatrix& m);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the (0,0) origin
};

struct RocCurve {
  std::vector<RocPoint> points;
};

// One-vs-rest ROC for a binary gold vector. Thresholds sweep the distinct
// scores in descending order; a score >= threshold counts as positive.
// Throws kValidation when golds are all positive or all negative;
// `what` names the class in the message.
RocCurve ComputeRoc(std::span<const double> scores, std::span<const bool> golds,
                    const std::string& what = "class");

// Trapezoidal area under the curve.
double Auc(const RocCurve& curve);

struct MetricsReport {
  std::string model;    // model kind name
  std::string feature;  // feature set name
  std::string split;    // "train", "val", "test", ...
  std::size_t records = 0;
  double accuracy = 0.0;  // 0 with records == 0 ("no data")
  ConfusionMatrix confusion;
  PrfSummary prf;
  // nullopt when the genre is absent from (or the only genre in) the golds.
  std::array<std::optional<double>, kGenreCount> auc{};
  double macro_auc = 0.0;

  std::string ToJson() const;
  static MetricsReport FromJson(const std::string& text);
  // Fixed-width table: one row per genre plus the averages.
  std::string FormatTable() const;
};

struct Evaluation {
  MetricsReport report;
  std::array<std::optional<RocCurve>, kGenreCount> curves{};
};

// Scores already-computed probability rows.
Evaluation EvaluateProbabilities(std::span<const Genre> golds,
                                 std::span<const Probabilities> probs);

// Checks every record (labeled, fields for `feature_set` present) before predicting.
Evaluation Evaluate(const AnyModel& model, const Vocabulary& vocab, const Corpus& records,
                    FeatureSet feature_set, const std::string& split,
                    std::size_t max_len = 0);  // 0: DefaultMaxLen(feature_set)

// Writes metrics.json, metrics.txt and roc_<genre>.csv into `dir`.
void WriteEvaluation(const Evaluation& eval, const std::filesystem::path& dir);

}  // namespace recipeforge

#endif  // RECIPEFORGE_EVALUATION_HPP_
