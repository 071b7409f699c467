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

#include "fixtures.hpp"
#include "recipeforge/error.hpp"
#include "recipeforge/features.hpp"

using namespace recipeforge;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize") {
  CHECK(Tokenize("No Bake Cheesecake") == Tokens{"no", "bake", "cheesecake"});
  CHECK(Tokenize("bake 450\xC2\xB0 for 10 to 12 minutes") ==
        Tokens{"bake", "450", "\xC2\xB0", "for", "10", "to", "12", "minutes"});
  CHECK(Tokenize("").empty());
  CHECK(Tokenize("Jell-O, 9x13!") == Tokens{"jell", "o", "9x13"});
}

TEST_CASE("compose feature text") {
  const RecipeRecord r = fixtures::NoBakeCheesecake();
  CHECK(ComposeFeatureText(r, FeatureSet::kTitle) == "No Bake Cheesecake");
  CHECK(ComposeFeatureText(r, FeatureSet::kTitleNer) ==
        "No Bake Cheesecake cream cheese sugar graham cracker crust");
  RecipeRecord bare = r;
  bare.ner.clear();
  CHECK(ComposeFeatureText(bare, FeatureSet::kTitleNer) == ComposeFeatureText(bare, FeatureSet::kTitle));
  try {
    ComposeFeatureText(r, FeatureSet::kTitleExtNer);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
  }
  RecipeRecord ext = r;
  ext.extended_ner = EntitySet{};
  ext.extended_ner->Insert("Cool Whip", EntityCategory::kEquipment);
  CHECK(ComposeFeatureText(ext, FeatureSet::kTitleExtNer) == "No Bake Cheesecake Cool Whip");
  CHECK(FeatureSetFromName("title-ext-ner") == FeatureSet::kTitleExtNer);
  CHECK_FALSE(FeatureSetFromName("nope"));
}

TEST_CASE("vocabulary") {
  const Vocabulary v = BuildVocabulary(std::vector<std::string>{"a b", "b c"}, {50000, 2});
  REQUIRE(v.size() == 5);
  CHECK(v.Term(kFirstTermId) == "b");
  CHECK(v.Term(kPadId) == "[PAD]");

  const Vocabulary all = BuildVocabulary(std::vector<std::string>{"a b", "b c"});
  CHECK(all.size() == 4 + 3);
  CHECK(all.Find("a"));
  CHECK(all.Find("c"));
  CHECK(all == BuildVocabulary(std::vector<std::string>{"a b", "b c"}));

  const Vocabulary capped = BuildVocabulary(std::vector<std::string>{"a b", "b c", "b a"}, {5, 1});
  REQUIRE(capped.size() == 5);
  CHECK(capped.Term(kFirstTermId) == "b");

  std::stringstream io;
  all.Write(io);
  CHECK(Vocabulary::Read(io) == all);
}

TEST_CASE("vectorize") {
  const Vocabulary v({"b", "c"});
  const CountVector x = Vectorize("b b c", v);
  REQUIRE(x.entries.size() == 2);
  CHECK(x.entries[0] == std::pair<TermId, double>{4, 2.0});
  CHECK(x.entries[1] == std::pair<TermId, double>{5, 1.0});
  CHECK(Vectorize("zzz qqq", v).entries.empty());

  const Vocabulary nb({"no", "bake", "cheesecake"});
  CHECK(Vectorize(ComposeFeatureText(fixtures::NoBakeCheesecake(), FeatureSet::kTitle), nb).Total() == 3.0);
}

TEST_CASE("encode sequence") {
  const Vocabulary v({"a"});
  CHECK(EncodeSequence("a", v, 5) == TokenSequence{2, 4, 3, 0, 0});
  CHECK(EncodeSequence("zzz qqq", v, 6) == TokenSequence{2, 1, 1, 3, 0, 0});
  std::string long_text;
  for (int i = 0; i < 600; ++i) long_text += "a ";
  const TokenSequence s = EncodeSequence(long_text, v, 512);
  REQUIRE(s.size() == 512);
  CHECK(s[0] == kClsId);
  for (std::size_t i = 1; i <= 510; ++i) CHECK(s[i] == 4);
  CHECK(s[511] == kSepId);
  CHECK(DefaultMaxLen(FeatureSet::kDirections) == 512);
  CHECK(DefaultMaxLen(FeatureSet::kTitle) == 256);
}
