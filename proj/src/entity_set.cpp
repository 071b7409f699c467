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

#include "recipeforge/entity_set.hpp"

#include <array>

#include "recipeforge/entities.hpp"

namespace recipeforge {
namespace {

constexpr std::array<std::string_view, 7> kCategoryNames = {
    "ingredient", "process",   "temperature", "duration",
    "quantity",   "equipment", "other"};

}  // namespace

std::string_view EntityCategoryName(EntityCategory c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<EntityCategory> EntityCategoryFromName(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<EntityCategory>(i);
  }
  return std::nullopt;
}

bool EntitySet::Insert(Entity entity) {
  if (entity.normalized.empty()) return false;
  std::string key = EntityKey(entity.normalized);
  if (key.empty() || index_.count(key) > 0) return false;
  index_.emplace(std::move(key), entities_.size());
  entities_.push_back(std::move(entity));
  return true;
}

bool EntitySet::Insert(std::string_view surface, EntityCategory category) {
  return Insert(Entity{std::string(surface), NormalizeEntity(surface), category});
}

const Entity* EntitySet::Find(std::string_view normalized_or_surface) const {
  const auto it = index_.find(EntityKey(normalized_or_surface));
  return it == index_.end() ? nullptr : &entities_[it->second];
}

bool EntitySet::Contains(std::string_view normalized_or_surface) const {
  return Find(normalized_or_surface) != nullptr;
}

std::vector<std::string> EntitySet::Keys() const {
  std::vector<std::string> keys;
  keys.reserve(entities_.size());
  for (const Entity& e : entities_) keys.push_back(EntityKey(e.normalized));
  return keys;
}

bool operator==(const EntitySet& a, const EntitySet& b) {
  if (a.entities_.size() != b.entities_.size()) return false;
  for (std::size_t i = 0; i < a.entities_.size(); ++i) {
    if (a.entities_[i].normalized != b.entities_[i].normalized ||
        a.entities_[i].category != b.entities_[i].category) {
      return false;
    }
  }
  return true;
}

}  // namespace recipeforge
