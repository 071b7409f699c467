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

#ifndef RECIPEFORGE_ENTITIES_HPP_
#define RECIPEFORGE_ENTITIES_HPP_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "recipeforge/corpus.hpp"
#include "recipeforge/entity_set.hpp"

namespace recipeforge {

// Literal six-character escape that stands for the degree sign in scraped
// recipe text.
inline constexpr std::string_view kEscapedDegree = "\\u00b0";
inline constexpr std::string_view kDegreeSign = "\xC2\xB0";

// Replaces every literal "°" escape with the degree sign.
std::string CanonicalizeDegree(std::string_view text);

// Drops hyphens and punctuation (keeping letters, digits, spaces and the
// degree sign), collapses whitespace. Casing is preserved; comparisons use
// EntityKey().
std::string NormalizeEntity(std::string_view surface);

// Lowercased NormalizeEntity(); the identity used for deduplication.
std::string EntityKey(std::string_view surface);

// Closed list of imperative cooking verbs, stored lowercased.
class VerbLexicon {
 public:
  VerbLexicon();  // built-in list
  explicit VerbLexicon(std::vector<std::string> verbs);

  // One verb per line; blank lines and '#' comments skipped.
  static VerbLexicon FromFile(const std::filesystem::path& path);

  bool Contains(std::string_view word) const;
  const std::set<std::string>& verbs() const { return verbs_; }

 private:
  std::set<std::string> verbs_;
};

const VerbLexicon& DefaultVerbLexicon();

// Rule-based extractor for processes, temperatures, durations, pan sizes and
// capitalized brand/equipment names.
EntitySet ExtractPattern(std::string_view direction,
                         const VerbLexicon& lexicon = DefaultVerbLexicon());

// Ingredient lexicon derived from the corpus's own source entity lists:
// lowercased normalized term -> number of records listing it.
class Gazetteer {
 public:
  Gazetteer() = default;

  void Add(const std::string& key, std::size_t count = 1);

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::size_t Frequency(std::string_view key) const;
  bool Contains(std::string_view key) const { return Frequency(key) > 0; }
  std::size_t max_tokens() const { return max_tokens_; }
  const std::map<std::string, std::size_t, std::less<>>& terms() const {
    return terms_;
  }

 private:
  std::map<std::string, std::size_t, std::less<>> terms_;
  std::size_t max_tokens_ = 0;
};

Gazetteer BuildGazetteer(const Corpus& records);

// Longest-match-first scan against gazetteer keys. Matches are ingredients;
// a number directly in front of a match additionally yields a quantity span
// ("1 egg").
EntitySet ExtractGazetteer(std::string_view direction, const Gazetteer& gaz);

// Union keyed by lowercased normalized text. Insertion order: source list,
// then `a`, then `b`; the first inserted surface wins on a collision.
EntitySet MergeEntities(const std::vector<std::string>& source_ner,
                        const EntitySet& a, const EntitySet& b);

// Direction steps joined by single spaces.
std::string JoinDirections(const std::vector<std::string>& steps);

EntitySet ExtendRecord(const RecipeRecord& record, const Gazetteer& gaz,
                       const VerbLexicon& lexicon = DefaultVerbLexicon());

struct ExtendOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Fills extended_ner for every record. Output is independent of the thread
// count.
Corpus ExtendCorpus(Corpus records, const Gazetteer& gaz,
                    const VerbLexicon& lexicon = DefaultVerbLexicon(),
                    ExtendOptions options = {});

}  // namespace recipeforge

#endif  // RECIPEFORGE_ENTITIES_HPP_
