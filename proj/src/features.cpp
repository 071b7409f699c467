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

#include "recipeforge/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "recipeforge/entities.hpp"
#include "recipeforge/error.hpp"

namespace recipeforge {
namespace {

constexpr std::array<std::string_view, 4> kSpecialNames = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};

}  // namespace

std::vector<std::string> Tokenize(std::string_view raw) {
  const std::string text = CanonicalizeDegree(raw);
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (text.compare(i, kDegreeSign.size(), kDegreeSign) == 0) {
      flush();
      tokens.emplace_back(kDegreeSign);
      i += kDegreeSign.size();
    } else if (c < 0x80) {
      if (std::isalnum(c)) {
        current.push_back(static_cast<char>(std::tolower(c)));
      } else {
        flush();
      }
      ++i;
    } else {
      // Non-ASCII bytes are treated as letters.
      current.push_back(static_cast<char>(c));
      ++i;
    }
  }
  flush();
  return tokens;
}

std::string_view FeatureSetName(FeatureSet feature_set) {
  switch (feature_set) {
    case FeatureSet::kTitle: return "title";
    case FeatureSet::kTitleNer: return "title-ner";
    case FeatureSet::kTitleExtNer: return "title-ext-ner";
    case FeatureSet::kDirections: return "directions";
  }
  return "title";
}

std::optional<FeatureSet> FeatureSetFromName(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (key == "title") return FeatureSet::kTitle;
  if (key == "titlener") return FeatureSet::kTitleNer;
  if (key == "titleextner" || key == "titleextendedner") return FeatureSet::kTitleExtNer;
  if (key == "directions") return FeatureSet::kDirections;
  return std::nullopt;
}

std::size_t DefaultMaxLen(FeatureSet feature_set) {
  return feature_set == FeatureSet::kDirections ? 512 : 256;
}

std::string ComposeFeatureText(const RecipeRecord& record, FeatureSet feature_set) {
  std::string out;
  switch (feature_set) {
    case FeatureSet::kTitle:
      return record.title;
    case FeatureSet::kTitleNer:
      out = record.title;
      for (const std::string& e : record.ner) out += " " + e;
      return out;
    case FeatureSet::kTitleExtNer:
      if (!record.extended_ner) {
        Fail(ErrorKind::kValidation, "record " + std::to_string(record.id) +
                                         " has no extended entities; run extend-ner first");
      }
      out = record.title;
      for (const Entity& e : *record.extended_ner) out += " " + e.normalized;
      return out;
    case FeatureSet::kDirections:
      return JoinDirections(record.directions);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> terms) {
  terms_.reserve(terms.size() + kSpecialNames.size());
  for (std::string_view s : kSpecialNames) terms_.emplace_back(s);
  for (std::string& t : terms) {
    if (t.empty()) Fail(ErrorKind::kValidation, "empty vocabulary term");
    const auto id = static_cast<TermId>(terms_.size());
    if (!index_.emplace(t, id).second) {
      Fail(ErrorKind::kValidation, "duplicate vocabulary term '" + t + "'");
    }
    terms_.push_back(std::move(t));
  }
}

std::optional<TermId> Vocabulary::Find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::Write(std::ostream& out) const {
  for (const std::string& t : terms_) out << t << '\n';
}

void Vocabulary::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  Write(out);
}

Vocabulary Vocabulary::Read(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.size() < kSpecialNames.size()) {
    Fail(ErrorKind::kFormat, "vocabulary file lacks the special-token header");
  }
  for (std::size_t k = 0; k < kSpecialNames.size(); ++k) {
    if (lines[k] != kSpecialNames[k]) {
      Fail(ErrorKind::kFormat, "vocabulary line " + std::to_string(k) + " must be " +
                                   std::string(kSpecialNames[k]));
    }
  }
  return Vocabulary(std::vector<std::string>(lines.begin() + kSpecialNames.size(), lines.end()));
}

Vocabulary Vocabulary::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  return Read(in);
}

Vocabulary BuildVocabulary(const std::vector<std::string>& documents, VocabularyOptions options) {
  if (options.max_size <= kSpecialNames.size()) {
    Fail(ErrorKind::kValidation, "vocabulary max size must exceed the 4 special tokens");
  }
  if (options.min_df < 1) Fail(ErrorKind::kValidation, "min_df must be at least 1");
  // Phase 1: document frequencies.
  std::map<std::string, std::size_t> df;
  for (const std::string& doc : documents) {
    std::vector<std::string> tokens = Tokenize(doc);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (std::string& t : tokens) ++df[std::move(t)];
  }
  // Phase 2: rank by frequency, then lexicographically.
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [term, count] : df) {
    if (count >= options.min_df) ranked.emplace_back(term, count);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t keep = std::min(ranked.size(), options.max_size - kSpecialNames.size());
  std::vector<std::string> terms;
  terms.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) terms.push_back(std::move(ranked[k].first));
  return Vocabulary(std::move(terms));
}

Vocabulary BuildVocabulary(const Corpus& records, FeatureSet feature_set, VocabularyOptions options) {
  std::vector<std::string> docs;
  docs.reserve(records.size());
  for (const RecipeRecord& r : records) docs.push_back(ComposeFeatureText(r, feature_set));
  return BuildVocabulary(docs, options);
}

// ---------------------------------------------------------------------------
// Vectors and sequences

double CountVector::Total() const {
  double total = 0.0;
  for (const auto& [id, count] : entries) total += count;
  return total;
}

double CountVector::At(TermId id) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), id,
                                   [](const auto& e, TermId v) { return e.first < v; });
  return (it != entries.end() && it->first == id) ? it->second : 0.0;
}

CountVector Vectorize(std::string_view text, const Vocabulary& vocab) {
  std::map<TermId, double> counts;
  for (const std::string& token : Tokenize(text)) {
    if (const auto id = vocab.Find(token); id && *id >= kFirstTermId) counts[*id] += 1.0;
  }
  CountVector v;
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

TokenSequence EncodeSequence(std::string_view text, const Vocabulary& vocab, std::size_t max_len) {
  if (max_len < 3) Fail(ErrorKind::kValidation, "sequence length must be at least 3");
  TokenSequence seq;
  seq.reserve(max_len);
  seq.push_back(kClsId);
  for (const std::string& token : Tokenize(text)) {
    if (seq.size() == max_len - 1) break;
    const auto id = vocab.Find(token);
    seq.push_back(id && *id >= kFirstTermId ? *id : kUnkId);
  }
  seq.push_back(kSepId);
  seq.resize(max_len, kPadId);
  return seq;
}

}  // namespace recipeforge
