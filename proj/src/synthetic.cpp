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

#include "recipeforge/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "recipeforge/entities.hpp"
#include "recipeforge/error.hpp"
#include "recipeforge/random.hpp"

namespace recipeforge {
namespace {

const std::array<std::vector<std::string>, kGenreCount>& DefaultKeywords() {
  static const std::array<std::vector<std::string>, kGenreCount> pools = {{
      {"flour", "yeast", "sourdough", "croissant", "brioche", "baguette", "muffin", "scone",
       "pastry", "shortening", "cupcake", "cookie", "biscuit", "loaf", "frosting", "ganache",
       "meringue", "pretzel", "bagel", "strudel"},
      {"lemonade", "smoothie", "espresso", "cocktail", "mojito", "tonic", "soda", "cider",
       "punch", "latte", "milkshake", "sangria", "kombucha", "lassi", "tea", "cappuccino",
       "margarita", "eggnog", "spritzer", "cordial"},
      {"chicken", "beef", "pork", "lamb", "mutton", "bacon", "sausage", "turkey", "shrimp",
       "salmon", "tuna", "prawn", "duck", "ham", "meatball", "brisket", "veal", "crab",
       "lobster", "venison"},
      {"spinach", "broccoli", "cauliflower", "zucchini", "eggplant", "kale", "cabbage",
       "carrot", "asparagus", "celery", "artichoke", "beetroot", "okra", "leek", "radish",
       "turnip", "squash", "chard", "parsnip", "sprouts"},
      {"burger", "pizza", "fries", "hotdog", "nachos", "taco", "burrito", "sandwich", "nuggets",
       "quesadilla", "wrap", "slider", "corndog", "ketchup", "mayo", "pepperoni",
       "cheeseburger", "hashbrown", "pickles", "bun"},
      {"oats", "granola", "muesli", "cornflakes", "porridge", "bran", "quinoa", "barley",
       "millet", "buckwheat", "rye", "semolina", "amaranth", "oatmeal", "flakes", "puffs",
       "farina", "sorghum", "spelt", "teff"},
      {"casserole", "stew", "lasagna", "risotto", "curry", "biryani", "goulash", "paella",
       "jambalaya", "meatloaf", "chili", "pilaf", "stroganoff", "ragu", "gumbo", "tagine",
       "moussaka", "enchilada", "dumplings", "pie"},
      {"coleslaw", "gravy", "relish", "chutney", "salsa", "hummus", "guacamole", "vinaigrette",
       "croutons", "cornbread", "tzatziki", "pesto", "aioli", "raita", "sauerkraut", "crudites",
       "stuffing", "tapenade", "compote", "dip"},
      {"kimchi", "sushi", "teriyaki", "miso", "tofu", "wasabi", "sriracha", "gochujang",
       "bulgogi", "ramen", "tempura", "ponzu", "harissa", "sambal", "tikka", "banh", "pho",
       "furikake", "yuzu", "dashi"},
  }};
  return pools;
}

const std::vector<std::string>& DefaultNoise() {
  static const std::vector<std::string> noise = {
      "easy",  "quick",   "homemade", "classic", "simple",  "best",   "family", "special",
      "fresh", "warm",    "golden",   "crispy",  "creamy",  "rustic", "sweet",  "savory",
      "light", "hearty",  "salt",     "pepper",  "water",   "oil",    "butter", "sugar",
      "garlic", "onion",  "milk",     "egg",     "lemon",   "honey",  "vanilla", "parsley"};
  return noise;
}

// Direction templates; {a} {b} are ingredient slots, {t} temperature,
// {m} minutes, {p} pan size.
const std::vector<std::string>& Templates() {
  static const std::vector<std::string> t = {
      "Preheat oven to {t} degrees.",
      "Mix the {a} and {b} in a large bowl.",
      "Add {a} and stir well.",
      "Bake for {m} minutes.",
      "Cook the {a} over medium heat for {m} minutes.",
      "Pour the {a} into a {p} pan.",
      "Stir in the {a} and {b} until smooth.",
      "Heat the {a} gently.",
      "Beat the {a} with the {b}.",
      "Refrigerate overnight.",
      "Boil the {a} for {m} minutes.",
      "Fill each cup with {a}.",
  };
  return t;
}

const std::string& Pick(const std::vector<std::string>& v, Rng& rng) {
  return v[static_cast<std::size_t>(rng.Below(v.size()))];
}

}  // namespace

void SyntheticConfig::Validate() const {
  if (per_genre < 1) Fail(ErrorKind::kValidation, "per-genre count must be at least 1");
  if (!(mixing_rate >= 0.0 && mixing_rate <= 1.0)) {
    Fail(ErrorKind::kValidation, "mixing rate must lie in [0, 1]");
  }
  if (title_words < 1 || ner_items < 1) {
    Fail(ErrorKind::kValidation, "title and ingredient lengths must be positive");
  }
  if (min_steps < 1 || max_steps < min_steps) {
    Fail(ErrorKind::kValidation, "step range must satisfy 1 <= min <= max");
  }
  if (noise.empty() && mixing_rate < 1.0) Fail(ErrorKind::kValidation, "noise pool is empty");
  std::map<std::string, int> owner;
  for (int g = 0; g < kGenreCount; ++g) {
    if (keywords[g].empty()) {
      Fail(ErrorKind::kValidation,
           "keyword pool for " + std::string(GenreName(GenreFromIndex(g))) + " is empty");
    }
    for (const std::string& w : keywords[g]) {
      const std::string key = EntityKey(w);
      const auto [it, fresh] = owner.emplace(key, g);
      if (!fresh && it->second != g) {
        Fail(ErrorKind::kValidation, "keyword '" + w + "' appears in the pools of " +
                                         std::string(GenreName(GenreFromIndex(it->second))) +
                                         " and " + std::string(GenreName(GenreFromIndex(g))));
      }
    }
  }
}

SyntheticConfig DefaultSyntheticConfig() {
  SyntheticConfig s;
  s.keywords = DefaultKeywords();
  s.noise = DefaultNoise();
  return s;
}

Corpus GenerateSynthetic(const SyntheticConfig& syn) {
  syn.Validate();
  Corpus out;
  out.reserve(syn.per_genre * kGenreCount);
  for (Genre g : kAllGenres) {
    const auto& pool = syn.keywords[GenreIndex(g)];
    for (std::size_t i = 0; i < syn.per_genre; ++i) {
      const RecordId id = static_cast<RecordId>(out.size());
      Rng rng(DeriveSeed(syn.seed, streams::kSynthetic, static_cast<std::uint64_t>(id)));
      auto word = [&]() -> const std::string& {
        return rng.Uniform() < syn.mixing_rate ? Pick(pool, rng) : Pick(syn.noise, rng);
      };
      RecipeRecord r;
      r.id = id;
      for (std::size_t k = 0; k < syn.title_words; ++k) {
        std::string w = word();
        if (k == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        r.title += (k ? " " : "") + w;
      }
      for (std::size_t k = 0; k < syn.ner_items; ++k) {
        std::string w = word();
        if (std::find(r.ner.begin(), r.ner.end(), w) == r.ner.end()) r.ner.push_back(w);
      }
      const std::size_t steps =
          syn.min_steps + static_cast<std::size_t>(rng.Below(syn.max_steps - syn.min_steps + 1));
      for (std::size_t k = 0; k < steps; ++k) {
        std::string step = Pick(Templates(), rng);
        auto fill = [&](const std::string& slot, const std::string& value) {
          for (std::size_t at; (at = step.find(slot)) != std::string::npos;) {
            step.replace(at, slot.size(), value);
          }
        };
        // Slots mostly reuse the ingredient list; sometimes a fresh draw.
        auto ingredient = [&]() -> std::string {
          return rng.Uniform() < 0.75 ? Pick(r.ner, rng) : word();
        };
        fill("{a}", ingredient());
        fill("{b}", ingredient());
        fill("{t}", std::to_string(300 + 25 * rng.Below(7)));
        fill("{m}", std::to_string(5 + 5 * rng.Below(12)));
        fill("{p}", rng.Below(2) ? "9x13" : "8-inch");
        r.directions.push_back(std::move(step));
      }
      r.genre = g;
      r.provenance = Provenance::kHuman;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace recipeforge
