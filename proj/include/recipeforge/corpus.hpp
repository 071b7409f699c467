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

#ifndef RECIPEFORGE_CORPUS_HPP_
#define RECIPEFORGE_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "recipeforge/entity_set.hpp"
#include "recipeforge/genre.hpp"

namespace recipeforge {

using RecordId = std::int64_t;

struct RecipeRecord {
  RecordId id = 0;
  std::string title;
  std::vector<std::string> directions;
  std::vector<std::string> ner;
  std::optional<EntitySet> extended_ner;
  std::optional<Genre> genre;
  Provenance provenance = Provenance::kUnlabeled;

  bool labeled() const { return genre.has_value(); }

  friend bool operator==(const RecipeRecord&, const RecipeRecord&) = default;
};

// Throws kValidation when a record breaks the record invariants: empty title,
// no direction steps, genre/provenance mismatch.
void ValidateRecord(const RecipeRecord& record);

using Corpus = std::vector<RecipeRecord>;

// ---------------------------------------------------------------------------
// CSV

enum class CsvFormat { kWithExtended, kWithoutExtended };

struct RowIssue {
  std::size_t row = 0;  // 1-based data row number (header is row 0)
  std::string message;
};

struct IngestResult {
  Corpus records;
  std::vector<RowIssue> issues;
};

// Reads a dataset CSV. Missing columns throw kFormat; per-row problems are
// collected in `issues` and the row is skipped. Ids are assigned in file
// order starting at 0 (skipped rows still consume their id).
IngestResult IngestCsv(const std::filesystem::path& path, CsvFormat format);
IngestResult IngestCsv(std::istream& in, CsvFormat format);

void WriteCsv(const Corpus& records, CsvFormat format, std::ostream& out);
void WriteCsv(const Corpus& records, CsvFormat format,
              const std::filesystem::path& path);

// Bracketed list cell helpers: ["a", "b"]. Throws kParse with the byte offset
// (relative to the cell start) on unbalanced quotes.
std::vector<std::string> DecodeListCell(std::string_view cell);
std::string EncodeListCell(const std::vector<std::string>& items);

// ---------------------------------------------------------------------------
// Canonical record file: one JSON object per line.

Corpus ReadRecords(const std::filesystem::path& path);
Corpus ReadRecords(std::istream& in);
void WriteRecords(const Corpus& records, const std::filesystem::path& path);
void WriteRecords(const Corpus& records, std::ostream& out);

std::string RecordToLine(const RecipeRecord& record);
RecipeRecord RecordFromLine(std::string_view line);

// ---------------------------------------------------------------------------
// Statistics, splitting, resampling.

struct GenreCounts {
  std::size_t human = 0;
  std::size_t machine = 0;
  std::size_t total() const { return human + machine; }
};

struct CorpusStats {
  std::array<GenreCounts, kGenreCount> per_genre{};
  std::size_t unlabeled = 0;

  const GenreCounts& of(Genre g) const { return per_genre[GenreIndex(g)]; }
  std::size_t human_total() const;
  std::size_t machine_total() const;
  std::size_t labeled_total() const { return human_total() + machine_total(); }
  std::size_t total() const { return labeled_total() + unlabeled; }
};

CorpusStats ComputeCorpusStats(const Corpus& records);

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<RecordId> train_ids;
  std::vector<RecordId> val_ids;
  std::vector<RecordId> test_ids;

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

// Per-genre counts a stratified split assigns to a genre with n records.
struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};
SplitCounts SplitCountsFor(std::size_t n, const SplitRatios& ratios);

DatasetSplit SplitStratified(const Corpus& records, const SplitRatios& ratios,
                             std::uint64_t seed);

// Exactly `per_genre` records of each genre, sampled without replacement.
Corpus Equalize(const Corpus& records, std::size_t per_genre,
                std::uint64_t seed);

// Records whose id is in `ids`, in the order of `ids`.
Corpus SelectById(const Corpus& records, const std::vector<RecordId>& ids);

}  // namespace recipeforge

#endif  // RECIPEFORGE_CORPUS_HPP_
