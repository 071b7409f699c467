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

#include "recipeforge/genre.hpp"

#include <algorithm>
#include <cctype>

#include "recipeforge/error.hpp"

namespace recipeforge {
namespace {

constexpr std::array<std::string_view, kGenreCount> kNames = {
    "Bakery", "Drinks", "NonVeg", "Vegetables", "FastFood",
    "Cereal", "Meal",   "Sides",  "Fusion"};

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kNumeric: return "numeric error";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kNotFound: return "not found";
    case ErrorKind::kConflict: return "conflict";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

std::string_view GenreName(Genre g) { return kNames[GenreIndex(g)]; }

std::optional<Genre> GenreFromId(long id) {
  if (id < 1 || id > kGenreCount) return std::nullopt;
  return static_cast<Genre>(id);
}

std::optional<Genre> GenreFromName(std::string_view name) {
  for (int i = 0; i < kGenreCount; ++i) {
    if (EqualsIgnoreCase(name, kNames[i])) return GenreFromIndex(i);
  }
  return std::nullopt;
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kHuman: return "human";
    case Provenance::kMachine: return "machine";
    case Provenance::kUnlabeled: return "unlabeled";
  }
  return "unlabeled";
}

std::optional<Provenance> ProvenanceFromName(std::string_view name) {
  if (EqualsIgnoreCase(name, "human")) return Provenance::kHuman;
  if (EqualsIgnoreCase(name, "machine")) return Provenance::kMachine;
  if (EqualsIgnoreCase(name, "unlabeled")) return Provenance::kUnlabeled;
  return std::nullopt;
}

}  // namespace recipeforge
