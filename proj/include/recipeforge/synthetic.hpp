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

#ifndef RECIPEFORGE_SYNTHETIC_HPP_
#define RECIPEFORGE_SYNTHETIC_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "recipeforge/corpus.hpp"

namespace recipeforge {

// Keyword/noise mixture corpus with known genres.
struct SyntheticConfig {
  std::size_t per_genre = 100;
  // One pool per genre, indexed by GenreIndex; must be pairwise disjoint.
  std::array<std::vector<std::string>, kGenreCount> keywords;
  std::vector<std::string> noise;
  // Probability that a sampled word comes from the genre pool.
  double mixing_rate = 0.7;
  std::size_t title_words = 4;
  std::size_t ner_items = 4;
  std::size_t min_steps = 3;
  std::size_t max_steps = 5;
  std::uint64_t seed = 7;

  // Throws kValidation on overlapping pools, empty pools, bad rates/counts.
  void Validate() const;
};

// Default pools: ingredient-like keywords per genre and a shared noise pool.
SyntheticConfig DefaultSyntheticConfig();

// Records ordered by genre then index; ids 0..9n-1; provenance human.
Corpus GenerateSynthetic(const SyntheticConfig& syn);

}  // namespace recipeforge

#endif  // RECIPEFORGE_SYNTHETIC_HPP_
