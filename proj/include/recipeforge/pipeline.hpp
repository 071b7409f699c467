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

#ifndef RECIPEFORGE_PIPELINE_HPP_
#define RECIPEFORGE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recipeforge/corpus.hpp"
#include "recipeforge/evaluation.hpp"
#include "recipeforge/features.hpp"
#include "recipeforge/models/model_io.hpp"

namespace recipeforge {

// Flat key=value settings. Later layers override earlier ones
// (defaults < config file < flags).
class RunConfig {
 public:
  void Set(const std::string& key, const std::string& value) { values_[key] = value; }
  void Merge(const RunConfig& over);
  bool Has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string String(const std::string& key, const std::string& fallback = "") const;
  double Double(const std::string& key, double fallback) const;
  std::size_t Size(const std::string& key, std::size_t fallback) const;
  std::uint64_t U64(const std::string& key, std::uint64_t fallback) const;

  // "key = value" lines; '#' starts a comment. Throws kParse with the line
  // number on malformed input.
  static RunConfig Parse(std::istream& in);
  static RunConfig Load(const std::filesystem::path& path);
  // Sorted key=value lines.
  std::string Serialize() const;
  // 16 hex digits of a 64-bit FNV-1a hash of Serialize().
  std::string RunId() const;

 private:
  std::map<std::string, std::string> values_;
};

// 64-bit FNV-1a.
std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string HexDigest(std::uint64_t h);
// Hash of a file's bytes (hex).
std::string FileDigest(const std::filesystem::path& path);

struct TrainRequest {
  ModelKind kind = ModelKind::kLogReg;
  FeatureSet feature = FeatureSet::kTitle;
  TrainConfig train = LinearTrainDefaults();
  double nb_alpha = 1.0;
  ForestConfig forest;
  std::size_t embedding_dim = 64;
  std::vector<std::size_t> hidden = {128};
  std::size_t max_len = 0;  // 0: DefaultMaxLen(feature)
  VocabularyOptions vocabulary;

  std::size_t SequenceLength() const { return max_len ? max_len : DefaultMaxLen(feature); }
};

// Fills a TrainRequest from config keys: model, feature, lr, batch, epochs,
// warmup, weight_decay, seed, alpha, trees, max_depth, max_features,
// embedding_dim, hidden (comma list), max_len, vocab_max_size, min_df.
// Unknown model/feature names throw kValidation.
TrainRequest TrainRequestFromConfig(const RunConfig& cfg);

struct TrainedModel {
  AnyModel model;
  Vocabulary vocab;
  TrainLog log;
};

// Builds the vocabulary on `train` and fits the requested model.
TrainedModel TrainOnRecords(const Corpus& train, const TrainRequest& req);

struct ExperimentConfig {
  std::vector<FeatureSet> features = {FeatureSet::kTitle, FeatureSet::kTitleNer,
                                       FeatureSet::kTitleExtNer};
  std::vector<ModelKind> models = {ModelKind::kNaiveBayes, ModelKind::kLogReg,
                                   ModelKind::kSvm};
  TrainRequest base;  // kind/feature are overwritten per cell
  SplitRatios ratios;
  std::uint64_t seed = 0;
  // Sample exactly this many records per genre first (balanced runs).
  std::optional<std::size_t> equalize_per_genre;
  // Records are shuffled under the seed and cut into blocks of this many,
  // each run independently; a short tail joins the last block. 0: a single
  // block holding the whole corpus.
  std::size_t block_size = 0;
};

struct ExperimentRow {
  std::size_t block = 0;
  std::string feature;
  std::string model;
  std::size_t train_n = 0, val_n = 0, test_n = 0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  double test_macro_f1 = 0.0;
  double test_macro_auc = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  // Test-split evaluation per row, same order.
  std::vector<Evaluation> test_evaluations;
};

ExperimentResult RunExperiment(const Corpus& records, const ExperimentConfig& cfg);

std::string ExperimentCsv(const std::vector<ExperimentRow>& rows);
std::string ExperimentTable(const std::vector<ExperimentRow>& rows);

}  // namespace recipeforge

#endif  // RECIPEFORGE_PIPELINE_HPP_
