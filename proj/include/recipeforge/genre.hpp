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

#ifndef RECIPEFORGE_GENRE_HPP_
#define RECIPEFORGE_GENRE_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace recipeforge {

// The nine recipe genres with their fixed dataset label ids.
enum class Genre : int {
  kBakery = 1,
  kDrinks = 2,
  kNonVeg = 3,
  kVegetables = 4,
  kFastFood = 5,
  kCereal = 6,
  kMeal = 7,
  kSides = 8,
  kFusion = 9,
};

inline constexpr int kGenreCount = 9;

inline constexpr std::array<Genre, kGenreCount> kAllGenres = {
    Genre::kBakery,   Genre::kDrinks, Genre::kNonVeg,
    Genre::kVegetables, Genre::kFastFood, Genre::kCereal,
    Genre::kMeal,     Genre::kSides,  Genre::kFusion};

inline constexpr int GenreId(Genre g) { return static_cast<int>(g); }
// Zero-based position, used to index per-class parameter rows.
inline constexpr int GenreIndex(Genre g) { return static_cast<int>(g) - 1; }
inline constexpr Genre GenreFromIndex(int index) {
  return static_cast<Genre>(index + 1);
}

std::string_view GenreName(Genre g);

// Accepts 1..9 only.
std::optional<Genre> GenreFromId(long id);

// Case-insensitive match against the nine names ("bakery", "NonVeg"...).
std::optional<Genre> GenreFromName(std::string_view name);

enum class Provenance { kHuman, kMachine, kUnlabeled };

std::string_view ProvenanceName(Provenance p);
std::optional<Provenance> ProvenanceFromName(std::string_view name);

}  // namespace recipeforge

#endif  // RECIPEFORGE_GENRE_HPP_
