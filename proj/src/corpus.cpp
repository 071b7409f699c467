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

#include "recipeforge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "recipeforge/entities.hpp"
#include "recipeforge/error.hpp"
#include "recipeforge/random.hpp"

namespace recipeforge {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// One physical CSV record with the absolute byte offset of each field.
struct CsvRow {
  std::vector<std::string> fields;
  std::vector<std::size_t> offsets;
};

// RFC 4180 reader over a stream: quoted fields may span lines, "" escapes a
// quote. Tracks absolute byte offsets for diagnostics.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool Next(CsvRow& row) {
    row.fields.clear();
    row.offsets.clear();
    int c = Get();
    if (c == EOF) return false;
    std::string field;
    std::size_t field_start = offset_ - 1;
    bool quoted = false;
    while (true) {
      if (quoted) {
        if (c == EOF) {
          Fail(ErrorKind::kParse, "unbalanced quote in CSV field starting at byte " +
                                      std::to_string(field_start));
        }
        if (c == '"') {
          if (in_.peek() == '"') {
            Get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          field.push_back(static_cast<char>(c));
        }
      } else if (c == '"' && field.empty()) {
        quoted = true;
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        row.offsets.push_back(field_start);
        field.clear();
        field_start = offset_;
      } else if (c == '\n' || c == EOF) {
        break;
      } else if (c == '\r' && in_.peek() == '\n') {
        // tolerate CRLF
      } else {
        field.push_back(static_cast<char>(c));
      }
      c = Get();
    }
    row.fields.push_back(std::move(field));
    row.offsets.push_back(field_start);
    return true;
  }

 private:
  int Get() {
    const int c = in_.get();
    if (c != EOF) ++offset_;
    return c;
  }

  std::istream& in_;
  std::size_t offset_ = 0;
};

std::string QuoteCsv(std::string_view field) {
  const bool needs = field.find_first_of(",\"\n\r") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> ExtendedSurfaces(const EntitySet& set) {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (const Entity& e : set) out.push_back(e.normalized);
  return out;
}

EntitySet EntitySetFromStrings(const std::vector<std::string>& items,
                               const std::vector<EntityCategory>* categories) {
  EntitySet set;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const EntityCategory cat =
        categories != nullptr ? (*categories)[i] : EntityCategory::kOther;
    set.Insert(Entity{items[i], NormalizeEntity(items[i]), cat});
  }
  return set;
}

std::vector<std::string> JsonStrings(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) Fail(ErrorKind::kFormat, std::string("field '") + key + "' must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) Fail(ErrorKind::kFormat, std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

void ValidateRecord(const RecipeRecord& record) {
  const std::string where = "record " + std::to_string(record.id) + ": ";
  if (Trim(record.title).empty()) Fail(ErrorKind::kValidation, where + "empty title");
  if (record.directions.empty()) Fail(ErrorKind::kValidation, where + "no direction steps");
  if (record.genre.has_value() == (record.provenance == Provenance::kUnlabeled)) {
    Fail(ErrorKind::kValidation,
         where + "genre and provenance disagree (labeled records need human or machine provenance)");
  }
}

// ---------------------------------------------------------------------------
// List cells

std::vector<std::string> DecodeListCell(std::string_view cell) {
  std::vector<std::string> items;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < cell.size() && std::isspace(static_cast<unsigned char>(cell[i]))) ++i;
  };
  skip_ws();
  if (i == cell.size()) return items;
  if (cell[i] != '[') {
    Fail(ErrorKind::kParse, "list cell must start with '[' (byte " + std::to_string(i) + ")");
  }
  ++i;
  skip_ws();
  if (i < cell.size() && cell[i] == ']') return items;
  while (true) {
    skip_ws();
    if (i >= cell.size() || cell[i] != '"') {
      Fail(ErrorKind::kParse, "expected '\"' in list cell at byte " + std::to_string(i));
    }
    const std::size_t open = i++;
    std::string item;
    bool closed = false;
    while (i < cell.size()) {
      const char c = cell[i];
      if (c == '\\' && i + 1 < cell.size() && (cell[i + 1] == '"' || cell[i + 1] == '\\')) {
        item.push_back(cell[i + 1]);
        i += 2;
      } else if (c == '"') {
        closed = true;
        ++i;
        break;
      } else {
        item.push_back(c);
        ++i;
      }
    }
    if (!closed) {
      Fail(ErrorKind::kParse, "unbalanced quote in list cell at byte " + std::to_string(open));
    }
    items.push_back(std::move(item));
    skip_ws();
    if (i < cell.size() && cell[i] == ',') {
      ++i;
      continue;
    }
    if (i < cell.size() && cell[i] == ']') {
      ++i;
      skip_ws();
      if (i != cell.size()) {
        Fail(ErrorKind::kParse, "trailing text after list at byte " + std::to_string(i));
      }
      return items;
    }
    Fail(ErrorKind::kParse, "expected ',' or ']' in list cell at byte " + std::to_string(i));
  }
}

std::string EncodeListCell(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k > 0) out += ", ";
    out.push_back('"');
    for (char c : items[k]) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    out.push_back('"');
  }
  out.push_back(']');
  return out;
}

// ---------------------------------------------------------------------------
// CSV

IngestResult IngestCsv(const std::filesystem::path& path, CsvFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  return IngestCsv(in, format);
}

IngestResult IngestCsv(std::istream& in, CsvFormat format) {
  IngestResult result;
  CsvReader reader(in);
  CsvRow row;
  if (!reader.Next(row)) Fail(ErrorKind::kFormat, "missing CSV header row");

  std::map<std::string, std::size_t> columns;
  for (std::size_t k = 0; k < row.fields.size(); ++k) {
    columns.emplace(Lower(Trim(row.fields[k])), k);
  }
  auto require = [&](const std::string& name) {
    const auto it = columns.find(Lower(name));
    if (it == columns.end()) Fail(ErrorKind::kFormat, "missing required column '" + name + "'");
    return it->second;
  };
  const std::size_t c_title = require("title");
  const std::size_t c_dirs = require("directions");
  const std::size_t c_ner = require("NER");
  const std::size_t c_genre = require("genre");
  const std::size_t c_label = require("label");
  std::optional<std::size_t> c_ext;
  if (format == CsvFormat::kWithExtended) c_ext = require("extended_NER");
  std::optional<std::size_t> c_prov;
  if (auto it = columns.find("provenance"); it != columns.end()) c_prov = it->second;

  std::size_t row_number = 0;
  RecordId next_id = 0;
  while (true) {
    bool more = false;
    try {
      more = reader.Next(row);
    } catch (const Error& e) {
      result.issues.push_back({row_number + 1, e.what()});
      break;
    }
    if (!more) break;
    ++row_number;
    const RecordId id = next_id++;
    if (row.fields.size() == 1 && Trim(row.fields[0]).empty()) continue;  // blank line
    try {
      if (row.fields.size() != columns.size()) {
        Fail(ErrorKind::kFormat, "expected " + std::to_string(columns.size()) + " fields, found " +
                                     std::to_string(row.fields.size()));
      }
      auto list_cell = [&](std::size_t col) {
        try {
          return DecodeListCell(row.fields[col]);
        } catch (const Error& e) {
          // Rebase the in-cell offset onto the file.
          std::string msg = e.what();
          const auto pos = msg.rfind("byte ");
          if (pos != std::string::npos) {
            const std::size_t local = std::stoul(msg.substr(pos + 5));
            // +1 for the opening CSV quote of a quoted cell.
            msg = msg.substr(0, pos) + "byte " + std::to_string(row.offsets[col] + 1 + local);
          }
          Fail(ErrorKind::kParse, msg);
        }
      };
      RecipeRecord rec;
      rec.id = id;
      rec.title = Trim(row.fields[c_title]);
      rec.directions = list_cell(c_dirs);
      rec.ner = list_cell(c_ner);
      if (c_ext) rec.extended_ner = EntitySetFromStrings(list_cell(*c_ext), nullptr);

      const std::string genre_text = Trim(row.fields[c_genre]);
      const std::string label_text = Trim(row.fields[c_label]);
      std::optional<Genre> genre;
      if (!genre_text.empty()) {
        genre = GenreFromName(genre_text);
        if (!genre) {
          Fail(ErrorKind::kValidation, "record " + std::to_string(id) + ": genre '" + genre_text +
                                           "' is not one of the nine genres");
        }
      }
      if (!label_text.empty()) {
        char* end = nullptr;
        const long value = std::strtol(label_text.c_str(), &end, 10);
        const auto by_id = (*end == '\0') ? GenreFromId(value) : std::nullopt;
        if (!by_id) {
          Fail(ErrorKind::kValidation, "record " + std::to_string(id) + ": label '" + label_text +
                                           "' is not in 1..9");
        }
        if (genre && *genre != *by_id) {
          Fail(ErrorKind::kValidation, "record " + std::to_string(id) + ": genre '" + genre_text +
                                           "' disagrees with label " + label_text);
        }
        genre = by_id;
      }
      rec.genre = genre;
      if (genre) {
        rec.provenance = Provenance::kHuman;
        if (c_prov && !Trim(row.fields[*c_prov]).empty()) {
          const auto p = ProvenanceFromName(Trim(row.fields[*c_prov]));
          if (!p || *p == Provenance::kUnlabeled) {
            Fail(ErrorKind::kValidation, "record " + std::to_string(id) + ": bad provenance '" +
                                             row.fields[*c_prov] + "'");
          }
          rec.provenance = *p;
        }
      }
      ValidateRecord(rec);
      result.records.push_back(std::move(rec));
    } catch (const Error& e) {
      result.issues.push_back({row_number, std::string(ErrorKindName(e.kind())) + ": " + e.what()});
    }
  }
  return result;
}

void WriteCsv(const Corpus& records, CsvFormat format, std::ostream& out) {
  const bool ext = format == CsvFormat::kWithExtended;
  out << "title,directions,NER," << (ext ? "extended_NER," : "") << "genre,label\n";
  for (const RecipeRecord& r : records) {
    out << QuoteCsv(r.title) << ',' << QuoteCsv(EncodeListCell(r.directions)) << ','
        << QuoteCsv(EncodeListCell(r.ner)) << ',';
    if (ext) {
      const auto items = r.extended_ner ? ExtendedSurfaces(*r.extended_ner) : std::vector<std::string>{};
      out << QuoteCsv(EncodeListCell(items)) << ',';
    }
    if (r.genre) {
      out << Lower(GenreName(*r.genre)) << ',' << GenreId(*r.genre);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void WriteCsv(const Corpus& records, CsvFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  WriteCsv(records, format, out);
}

// ---------------------------------------------------------------------------
// Canonical record lines

std::string RecordToLine(const RecipeRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["directions"] = r.directions;
  j["ner"] = r.ner;
  if (r.extended_ner) {
    j["extended_ner"] = ExtendedSurfaces(*r.extended_ner);
    std::vector<std::string> cats;
    for (const Entity& e : *r.extended_ner) cats.emplace_back(EntityCategoryName(e.category));
    j["extended_ner_categories"] = cats;
  }
  if (r.genre) {
    j["genre"] = GenreName(*r.genre);
    j["label"] = GenreId(*r.genre);
  } else {
    j["genre"] = nullptr;
    j["label"] = nullptr;
  }
  j["provenance"] = ProvenanceName(r.provenance);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

RecipeRecord RecordFromLine(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorKind::kParse, std::string("malformed record line: ") + e.what());
  }
  if (!j.is_object()) Fail(ErrorKind::kFormat, "record line is not an object");
  RecipeRecord r;
  try {
    r.id = j.at("id").get<RecordId>();
    r.title = j.at("title").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("record line lacks id/title: ") + e.what());
  }
  r.directions = JsonStrings(j, "directions");
  r.ner = JsonStrings(j, "ner");
  if (j.contains("extended_ner") && !j["extended_ner"].is_null()) {
    const auto items = JsonStrings(j, "extended_ner");
    std::vector<EntityCategory> cats;
    const auto names = JsonStrings(j, "extended_ner_categories");
    if (names.size() == items.size()) {
      for (const auto& n : names) cats.push_back(EntityCategoryFromName(n).value_or(EntityCategory::kOther));
    } else {
      cats.assign(items.size(), EntityCategory::kOther);
    }
    r.extended_ner = EntitySetFromStrings(items, &cats);
  }
  if (j.contains("label") && !j["label"].is_null()) {
    const auto g = j["label"].is_number_integer() ? GenreFromId(j["label"].get<long>()) : std::nullopt;
    if (!g) Fail(ErrorKind::kValidation, "record " + std::to_string(r.id) + ": label outside 1..9");
    r.genre = g;
  } else if (j.contains("genre") && j["genre"].is_string()) {
    const auto g = GenreFromName(j["genre"].get<std::string>());
    if (!g) Fail(ErrorKind::kValidation, "record " + std::to_string(r.id) + ": unknown genre");
    r.genre = g;
  }
  r.provenance = r.genre ? Provenance::kHuman : Provenance::kUnlabeled;
  if (j.contains("provenance") && j["provenance"].is_string()) {
    const auto p = ProvenanceFromName(j["provenance"].get<std::string>());
    if (!p) Fail(ErrorKind::kValidation, "record " + std::to_string(r.id) + ": unknown provenance");
    r.provenance = *p;
  }
  ValidateRecord(r);
  return r;
}

Corpus ReadRecords(std::istream& in) {
  Corpus out;
  std::unordered_set<RecordId> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(RecordFromLine(line));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(out.back().id).second) {
      Fail(ErrorKind::kValidation, "line " + std::to_string(line_no) + ": duplicate record id " +
                                       std::to_string(out.back().id));
    }
  }
  return out;
}

Corpus ReadRecords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  return ReadRecords(in);
}

void WriteRecords(const Corpus& records, std::ostream& out) {
  for (const RecipeRecord& r : records) out << RecordToLine(r) << '\n';
}

void WriteRecords(const Corpus& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  WriteRecords(records, out);
}

// ---------------------------------------------------------------------------
// Stats, split, equalize

std::size_t CorpusStats::human_total() const {
  std::size_t n = 0;
  for (const auto& c : per_genre) n += c.human;
  return n;
}

std::size_t CorpusStats::machine_total() const {
  std::size_t n = 0;
  for (const auto& c : per_genre) n += c.machine;
  return n;
}

CorpusStats ComputeCorpusStats(const Corpus& records) {
  CorpusStats stats;
  for (const RecipeRecord& r : records) {
    if (!r.genre) {
      ++stats.unlabeled;
    } else if (r.provenance == Provenance::kMachine) {
      ++stats.per_genre[GenreIndex(*r.genre)].machine;
    } else {
      ++stats.per_genre[GenreIndex(*r.genre)].human;
    }
  }
  return stats;
}

SplitCounts SplitCountsFor(std::size_t n, const SplitRatios& ratios) {
  SplitCounts c;
  c.train = static_cast<std::size_t>(std::floor(ratios.train * static_cast<double>(n) + 1e-9));
  c.train = std::min(c.train, n);
  const std::size_t rest = n - c.train;
  const double val_share = ratios.val / (ratios.val + ratios.test);
  c.val = static_cast<std::size_t>(std::ceil(val_share * static_cast<double>(rest) - 1e-9));
  c.val = std::min(c.val, rest);
  c.test = rest - c.val;
  // Every part gets at least one record when n >= 3.
  if (n >= 3) {
    if (c.test == 0) {
      if (c.val > 1) --c.val; else --c.train;
      ++c.test;
    }
    if (c.val == 0) {
      if (c.test > 1) --c.test; else --c.train;
      ++c.val;
    }
  }
  return c;
}

DatasetSplit SplitStratified(const Corpus& records, const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.val > 0 && ratios.test > 0)) {
    Fail(ErrorKind::kValidation, "split ratios must all be positive");
  }
  if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    Fail(ErrorKind::kValidation, "split ratios must sum to 1");
  }
  std::array<std::vector<RecordId>, kGenreCount> by_genre;
  std::vector<RecordId> unlabeled;
  for (const RecipeRecord& r : records) {
    if (!r.genre) {
      unlabeled.push_back(r.id);
    } else {
      by_genre[GenreIndex(*r.genre)].push_back(r.id);
    }
  }
  if (!unlabeled.empty()) {
    std::string ids;
    for (std::size_t k = 0; k < unlabeled.size() && k < 20; ++k) {
      ids += (k ? "," : "") + std::to_string(unlabeled[k]);
    }
    if (unlabeled.size() > 20) ids += ",...";
    Fail(ErrorKind::kValidation, "cannot split unlabeled records: " + ids);
  }
  DatasetSplit split;
  for (int g = 0; g < kGenreCount; ++g) {
    auto& ids = by_genre[g];
    if (ids.empty()) continue;
    if (ids.size() < 3) {
      Fail(ErrorKind::kValidation, "genre " + std::string(GenreName(GenreFromIndex(g))) + " has only " +
                                       std::to_string(ids.size()) + " records; need at least 3");
    }
    std::sort(ids.begin(), ids.end());
    Rng rng(DeriveSeed(seed, streams::kSplit, g));
    rng.Shuffle(ids);
    const SplitCounts c = SplitCountsFor(ids.size(), ratios);
    split.train_ids.insert(split.train_ids.end(), ids.begin(), ids.begin() + c.train);
    split.val_ids.insert(split.val_ids.end(), ids.begin() + c.train, ids.begin() + c.train + c.val);
    split.test_ids.insert(split.test_ids.end(), ids.begin() + c.train + c.val, ids.end());
  }
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.val_ids.begin(), split.val_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  return split;
}

Corpus Equalize(const Corpus& records, std::size_t per_genre, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kGenreCount> by_genre;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (!records[k].genre) {
      Fail(ErrorKind::kValidation, "cannot equalize unlabeled record " + std::to_string(records[k].id));
    }
    by_genre[GenreIndex(*records[k].genre)].push_back(k);
  }
  for (int g = 0; g < kGenreCount; ++g) {
    if (by_genre[g].size() < per_genre) {
      Fail(ErrorKind::kValidation, "genre " + std::string(GenreName(GenreFromIndex(g))) + " has " +
                                       std::to_string(by_genre[g].size()) + " records, fewer than " +
                                       std::to_string(per_genre));
    }
  }
  Corpus out;
  out.reserve(per_genre * kGenreCount);
  for (int g = 0; g < kGenreCount; ++g) {
    auto& positions = by_genre[g];
    std::sort(positions.begin(), positions.end(),
              [&](std::size_t a, std::size_t b) { return records[a].id < records[b].id; });
    Rng rng(DeriveSeed(seed, streams::kEqualize, g));
    rng.Shuffle(positions);
    positions.resize(per_genre);
    std::sort(positions.begin(), positions.end(),
              [&](std::size_t a, std::size_t b) { return records[a].id < records[b].id; });
    for (std::size_t p : positions) out.push_back(records[p]);
  }
  return out;
}

Corpus SelectById(const Corpus& records, const std::vector<RecordId>& ids) {
  std::unordered_map<RecordId, std::size_t> position;
  for (std::size_t k = 0; k < records.size(); ++k) position.emplace(records[k].id, k);
  Corpus out;
  out.reserve(ids.size());
  for (RecordId id : ids) {
    const auto it = position.find(id);
    if (it == position.end()) Fail(ErrorKind::kNotFound, "no record with id " + std::to_string(id));
    out.push_back(records[it->second]);
  }
  return out;
}

}  // namespace recipeforge
