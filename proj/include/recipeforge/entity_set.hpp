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

#ifndef RECIPEFORGE_ENTITY_SET_HPP_
#define RECIPEFORGE_ENTITY_SET_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace recipeforge {

enum class EntityCategory {
  kIngredient,
  kProcess,
  kTemperature,
  kDuration,
  kQuantity,
  kEquipment,
  kOther,
};

std::string_view EntityCategoryName(EntityCategory c);
std::optional<EntityCategory> EntityCategoryFromName(std::string_view name);

struct Entity {
  std::string surface;     // text as found
  std::string normalized;  // NormalizeEntity(surface), casing preserved
  EntityCategory category = EntityCategory::kOther;
};

// Duplicate-free entity collection keyed by the lowercased normalized text.
// Iteration follows insertion order.
class EntitySet {
 public:
  EntitySet() = default;

  // Returns false (and leaves the set unchanged) when the key is already
  // present or the entity has an empty normalized form.
  bool Insert(Entity entity);

  // Builds an entity from a raw surface and inserts it.
  bool Insert(std::string_view surface, EntityCategory category);

  bool Contains(std::string_view normalized_or_surface) const;
  const Entity* Find(std::string_view normalized_or_surface) const;

  std::size_t size() const { return entities_.size(); }
  bool empty() const { return entities_.empty(); }

  const std::vector<Entity>& entities() const { return entities_; }
  auto begin() const { return entities_.begin(); }
  auto end() const { return entities_.end(); }

  // Lowercased keys in insertion order.
  std::vector<std::string> Keys() const;

  // Structural equality: same normalized text and category, same order.
  friend bool operator==(const EntitySet& a, const EntitySet& b);

 private:
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace recipeforge

#endif  // RECIPEFORGE_ENTITY_SET_HPP_
