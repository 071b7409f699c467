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

#ifndef RECIPEFORGE_FEATURES_HPP_
#define RECIPEFORGE_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recipeforge/corpus.hpp"

namespace recipeforge {

// Lowercases and splits on anything that is not a letter, digit or degree
// mark. The degree mark becomes its own token.
std::vector<std::string> Tokenize(std::string_view text);

enum class FeatureSet { kTitle, kTitleNer, kTitleExtNer, kDirections };

inline constexpr std::array<FeatureSet, 4> kAllFeatureSets = {
    FeatureSet::kTitle, FeatureSet::kTitleNer, FeatureSet::kTitleExtNer,
    FeatureSet::kDirections};

std::string_view FeatureSetName(FeatureSet feature_set);
// Accepts "title", "title-ner", "title-ext-ner", "directions" (and the
// CamelCase names).
std::optional<FeatureSet> FeatureSetFromName(std::string_view name);

// 256 for the title-based feature sets, 512 for directions.
std::size_t DefaultMaxLen(FeatureSet feature_set);

// Throws kValidation when kTitleExtNer is requested on a record whose
// extended entity set has not been computed.
std::string ComposeFeatureText(const RecipeRecord& record, FeatureSet feature_set);

using TermId = std::int32_t;

inline constexpr TermId kPadId = 0;
inline constexpr TermId kUnkId = 1;
inline constexpr TermId kClsId = 2;
inline constexpr TermId kSepId = 3;
inline constexpr TermId kFirstTermId = 4;

class Vocabulary {
 public:
  // Special tokens only.
  Vocabulary();

  // `terms` excludes the special tokens; index = kFirstTermId + position.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const { return terms_.size(); }
  const std::string& Term(TermId id) const { return terms_.at(id); }
  std::optional<TermId> Find(std::string_view term) const;
  const std::vector<std::string>& terms() const { return terms_; }

  void Save(const std::filesystem::path& path) const;
  void Write(std::ostream& out) const;
  static Vocabulary Load(const std::filesystem::path& path);
  static Vocabulary Read(std::istream& in);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_;
  }

 private:
  std::vector<std::string> terms_;  // includes the four special tokens
  std::unordered_map<std::string, TermId> index_;
};

struct VocabularyOptions {
  std::size_t max_size = 50000;  // including the four special tokens
  std::size_t min_df = 1;
};

Vocabulary BuildVocabulary(const std::vector<std::string>& documents,
                           VocabularyOptions options = {});
Vocabulary BuildVocabulary(const Corpus& records, FeatureSet feature_set,
                           VocabularyOptions options = {});

// Sparse (index, count) pairs, strictly increasing indices.
struct CountVector {
  std::vector<std::pair<TermId, double>> entries;

  double Total() const;
  double At(TermId id) const;  // binary search; 0 when absent
  friend bool operator==(const CountVector&, const CountVector&) = default;
};

CountVector Vectorize(std::string_view text, const Vocabulary& vocab);

using TokenSequence = std::vector<TermId>;

// [CLS] ids... [SEP] [PAD]... with exactly max_len entries; OOV -> [UNK].
TokenSequence EncodeSequence(std::string_view text, const Vocabulary& vocab,
                             std::size_t max_len);

}  // namespace recipeforge

#endif  // RECIPEFORGE_FEATURES_HPP_
