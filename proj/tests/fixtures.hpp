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

#ifndef RECIPEFORGE_TESTS_FIXTURES_HPP_
#define RECIPEFORGE_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recipeforge/corpus.hpp"
#include "recipeforge/entities.hpp"

namespace fixtures {

using namespace recipeforge;

inline RecipeRecord Make(RecordId id, std::string title, std::vector<std::string> directions,
                         std::vector<std::string> ner, std::optional<Genre> genre) {
  RecipeRecord r;
  r.id = id;
  r.title = std::move(title);
  r.directions = std::move(directions);
  r.ner = std::move(ner);
  r.genre = genre;
  r.provenance = genre ? Provenance::kHuman : Provenance::kUnlabeled;
  return r;
}

// Finnish oven pancake: title, directions and source NER as scraped.
inline RecipeRecord PannuKakku(RecordId id = 0) {
  return Make(id, "Pannu Kakku (Finnish Oven Pancake)",
              {"Preheat oven to 350 degrees.",
               "Melt butter in oven in a 9x13 pan; should be sizzling when you take it out.",
               "Meanwhile, mix other ingredients like hell - till very frothy. Pour batter into pan "
               "with melted butter.",
               "Bake 40 minutes. Eat immediately."},
              {"butter", "flour", "sugar", "eggs", "milk", "vanilla"}, Genre::kBakery);
}

// Its expected extended entity set.
inline std::set<std::string> PannuKakkuExtended() {
  return {"butter", "9x13", "sugar", "eggs", "Bake 40 minutes",
          "Melt", "vanilla", "350 degrees", "flour", "milk"};
}

// Muffin direction with the escaped degree sign, as found in the raw data.
inline std::string MuffinDirection() {
  return "Put flour in bowl first. Then sugar then yeast. Next add water 1 egg beaten and oil. Mix "
         "together with wooden spoon. Spray muffin pan with Pam. Fill 1/2 full. bake 450\\u00b0 for "
         "10 to 12 minutes. Pour rest of mixture in Tupperware container and refrigerate. Stir well "
         "each time you use. No rising necessary.";
}

inline RecipeRecord NoBakeCheesecake(RecordId id = 0) {
  return Make(id, "No Bake Cheesecake",
              {"Mix cream cheese and sugar with electric mixer on medium speed until well blended.",
               "Gently stir in Cool Whip.", "Spoon into crust.", "Refrigerate 3 hours or overnight."},
              {"cream cheese", "sugar", "graham cracker crust"}, Genre::kBakery);
}

inline std::set<std::string> Surfaces(const EntitySet& set) {
  std::set<std::string> out;
  for (const Entity& e : set) out.insert(e.normalized);
  return out;
}

inline bool ContainsKey(const EntitySet& set, const std::string& text) {
  return set.Contains(text);
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("recipeforge_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string Slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// n records per genre, titles built from a per-genre keyword so the genres
// are trivially separable.
inline Corpus PerGenre(std::size_t n) {
  static const char* kWords[] = {"bread",  "juice",  "chicken", "spinach", "burger",
                                 "oats",   "stew",   "slaw",    "kimchi"};
  Corpus out;
  RecordId id = 0;
  for (Genre g : kAllGenres) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string w = kWords[GenreIndex(g)];
      out.push_back(Make(id++, w + " dish " + std::to_string(i), {"Cook the " + w + "."}, {w}, g));
    }
  }
  return out;
}

}  // namespace fixtures

#endif  // RECIPEFORGE_TESTS_FIXTURES_HPP_
