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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "recipeforge/corpus.hpp"
#include "recipeforge/error.hpp"

using namespace recipeforge;

namespace {

IngestResult Ingest(const std::string& text, CsvFormat fmt = CsvFormat::kWithoutExtended) {
  std::istringstream in(text);
  return IngestCsv(in, fmt);
}

const char* kHeader = "title,directions,NER,genre,label\n";

Corpus OneGenre(std::size_t n, Genre g = Genre::kMeal) {
  Corpus c;
  for (std::size_t i = 0; i < n; ++i) {
    c.push_back(fixtures::Make(static_cast<RecordId>(i), "t" + std::to_string(i), {"Stir."}, {}, g));
  }
  return c;
}

std::set<RecordId> Ids(const std::vector<RecordId>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("ingest maps genre names to labels") {
  const auto res = Ingest(std::string(kHeader) +
                          "No Bake Cheesecake,\"[\"\"Mix.\"\"]\",\"[\"\"cream cheese\"\"]\",bakery,\n"
                          "Lime Sherbet,\"[\"\"Freeze.\"\"]\",\"[\"\"milk\"\"]\",drinks,\n");
  REQUIRE(res.issues.empty());
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].genre == Genre::kBakery);
  CHECK(GenreId(*res.records[0].genre) == 1);
  CHECK(GenreId(*res.records[1].genre) == 2);
  CHECK(res.records[0].provenance == Provenance::kHuman);
  CHECK(res.records[0].ner == std::vector<std::string>{"cream cheese"});
}

TEST_CASE("header-only csv gives no records and no issues") {
  const auto res = Ingest(kHeader);
  CHECK(res.records.empty());
  CHECK(res.issues.empty());
}

TEST_CASE("missing column is a format error") {
  try {
    Ingest("title,directions,genre,label\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kFormat);
  }
}

TEST_CASE("bad rows are reported and skipped") {
  const auto res = Ingest(std::string(kHeader) +
                          "A,\"[\"\"Mix.\"\"]\",[],bakery,2\n"   // genre/label disagree
                          "B,\"[\"\"Mix.\"\"]\",[],,11\n"        // label out of range
                          "C,\"[\"\"Mix.\"\"]\",[],,\n");
  CHECK(res.issues.size() == 2);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].id == 2);
  CHECK(res.records[0].provenance == Provenance::kUnlabeled);
}

TEST_CASE("csv round trip keeps records") {
  Corpus c = {fixtures::PannuKakku(0), fixtures::NoBakeCheesecake(1)};
  c[1].genre.reset();
  c[1].provenance = Provenance::kUnlabeled;
  std::ostringstream out;
  WriteCsv(c, CsvFormat::kWithoutExtended, out);
  const auto back = Ingest(out.str());
  REQUIRE(back.issues.empty());
  CHECK(back.records == c);
}

TEST_CASE("record file round trip") {
  Corpus c = {fixtures::PannuKakku(4), fixtures::NoBakeCheesecake(9)};
  c[0].extended_ner = ExtendRecord(c[0], BuildGazetteer(c));
  c[1].provenance = Provenance::kMachine;
  std::stringstream io;
  WriteRecords(c, io);
  CHECK(ReadRecords(io) == c);
}

TEST_CASE("list cell with unbalanced quote reports an offset") {
  try {
    DecodeListCell("[\"abc");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("stats") {
  SUBCASE("empty corpus") {
    const CorpusStats st = ComputeCorpusStats({});
    CHECK(st.total() == 0);
    CHECK(st.unlabeled == 0);
    for (Genre g : kAllGenres) CHECK(st.of(g).total() == 0);
  }
  SUBCASE("one human record per genre") {
    const CorpusStats st = ComputeCorpusStats(fixtures::PerGenre(1));
    for (Genre g : kAllGenres) {
      CHECK(st.of(g).human == 1);
      CHECK(st.of(g).machine == 0);
    }
    CHECK(st.total() == 9);
  }
}

TEST_CASE("record invariants") {
  RecipeRecord r = fixtures::PannuKakku();
  r.directions.clear();
  CHECK_THROWS_AS(ValidateRecord(r), Error);
  r = fixtures::PannuKakku();
  r.provenance = Provenance::kUnlabeled;
  CHECK_THROWS_AS(ValidateRecord(r), Error);
}

TEST_CASE("split counts follow floor then remainder") {
  const SplitRatios r;
  auto check = [&](std::size_t n, std::size_t tr, std::size_t va, std::size_t te) {
    const SplitCounts c = SplitCountsFor(n, r);
    CHECK(c.train == tr);
    CHECK(c.val == va);
    CHECK(c.test == te);
  };
  check(100, 80, 10, 10);
  check(10, 8, 1, 1);
  check(11, 8, 2, 1);

  const DatasetSplit s = SplitStratified(OneGenre(100), r, 7);
  CHECK(s.train_ids.size() == 80);
  CHECK(s.val_ids.size() == 10);
  CHECK(s.test_ids.size() == 10);
}

TEST_CASE("split is a deterministic stratified partition") {
  const Corpus c = fixtures::PerGenre(13);
  const DatasetSplit a = SplitStratified(c, {}, 5);
  CHECK(a == SplitStratified(c, {}, 5));
  CHECK_FALSE(a == SplitStratified(c, {}, 6));
  std::set<RecordId> all = Ids(a.train_ids);
  for (RecordId id : a.val_ids) CHECK(all.insert(id).second);
  for (RecordId id : a.test_ids) CHECK(all.insert(id).second);
  CHECK(all.size() == c.size());
  // 13 per genre -> 10/2/1 each
  std::map<Genre, int> test_per_genre;
  for (const auto& r : SelectById(c, a.test_ids)) ++test_per_genre[*r.genre];
  for (Genre g : kAllGenres) CHECK(test_per_genre[g] == 1);
}

TEST_CASE("genre with fewer than three records cannot be split") {
  CHECK_THROWS_AS(SplitStratified(OneGenre(2), {}, 0), Error);
}

TEST_CASE("equalize") {
  SUBCASE("one per genre returns the same records") {
    const Corpus c = fixtures::PerGenre(1);
    Corpus eq = Equalize(c, 1, 3);
    std::sort(eq.begin(), eq.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    CHECK(eq == c);
  }
  SUBCASE("3 of 5 per genre, repeatable") {
    const Corpus c = fixtures::PerGenre(5);
    const Corpus a = Equalize(c, 3, 11);
    const Corpus b = Equalize(c, 3, 11);
    CHECK(a.size() == 27);
    CHECK(a == b);
    const CorpusStats st = ComputeCorpusStats(a);
    for (Genre g : kAllGenres) CHECK(st.of(g).total() == 3);
  }
  SUBCASE("too few records") { CHECK_THROWS_AS(Equalize(fixtures::PerGenre(2), 3, 0), Error); }
}
