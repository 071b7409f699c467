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

#include "recipeforge/entities.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <thread>

#include "recipeforge/error.hpp"

namespace recipeforge {
namespace {

bool IsAsciiAlnum(unsigned char c) { return std::isalnum(c) != 0; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// A whitespace-delimited chunk with surrounding punctuation stripped.
struct Token {
  std::size_t begin = 0;  // byte range into the original text
  std::size_t end = 0;
  std::string text;       // original bytes of the stripped chunk
  std::string lower;      // degree-canonicalized, lowercased
  bool sentence_start = false;
  bool ends_sentence = false;
};

bool IsTrailingPunct(std::string_view s, std::size_t pos) {
  const unsigned char c = static_cast<unsigned char>(s[pos]);
  return c < 0x80 && !IsAsciiAlnum(c);
}

bool IsBoundaryChar(char c) { return c == '.' || c == '!' || c == '?' || c == ';' || c == ':'; }

// Splits text into tokens and marks sentence boundaries (. ! ? ; : at the end
// of a chunk).
std::vector<Token> Chunk(std::string_view text) {
  std::vector<Token> tokens;
  bool next_starts = true;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && IsTrailingPunct(text, b) &&
           text.compare(b, kEscapedDegree.size(), kEscapedDegree) != 0) {
      ++b;
    }
    bool boundary = false;
    while (e > b && IsTrailingPunct(text, e - 1)) {
      // "°" ends in a digit, so the escape is never stripped here.
      if (IsBoundaryChar(text[e - 1])) boundary = true;
      --e;
    }
    if (b == e) {
      // Pure punctuation chunk such as "-" or ".".
      for (std::size_t k = i; k < j; ++k) {
        if (IsBoundaryChar(text[k])) boundary = true;
      }
      if (boundary) {
        if (!tokens.empty()) tokens.back().ends_sentence = true;
        next_starts = true;
      }
      i = j;
      continue;
    }
    Token t;
    t.begin = b;
    t.end = e;
    t.text = std::string(text.substr(b, e - b));
    t.lower = AsciiLower(CanonicalizeDegree(t.text));
    t.sentence_start = next_starts;
    t.ends_sentence = boundary;
    next_starts = boundary;
    tokens.push_back(std::move(t));
    i = j;
  }
  return tokens;
}

// [first, last) token ranges per sentence.
std::vector<std::pair<std::size_t, std::size_t>> Sentences(const std::vector<Token>& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].ends_sentence || k + 1 == tokens.size()) {
      out.emplace_back(start, k + 1);
      start = k + 1;
    }
  }
  return out;
}

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), IsDigit);
}

// 12, 1.5, 1/2, 10-12
bool IsNumber(std::string_view s) {
  if (AllDigits(s)) return true;
  for (char sep : {'.', '/', '-'}) {
    const auto pos = s.find(sep);
    if (pos != std::string_view::npos && AllDigits(s.substr(0, pos)) &&
        AllDigits(s.substr(pos + 1))) {
      return true;
    }
  }
  return false;
}

// "450°", "450°f", "350°c"
bool IsNumberWithDegree(std::string_view s) {
  const auto pos = s.find(kDegreeSign);
  if (pos == std::string_view::npos || pos == 0) return false;
  if (!IsNumber(s.substr(0, pos))) return false;
  const std::string_view rest = s.substr(pos + kDegreeSign.size());
  return rest.empty() || rest == "f" || rest == "c";
}

bool IsDegreeWord(std::string_view s) {
  return s == kDegreeSign || s == "degrees" || s == "degree" || s == "deg";
}

bool IsTemperatureScale(std::string_view s) {
  return s == "f" || s == "c" || s == "fahrenheit" || s == "celsius";
}

bool IsTimeUnit(std::string_view s) {
  return s == "second" || s == "seconds" || s == "minute" || s == "minutes" || s == "hour" ||
         s == "hours";
}

bool IsRangeWord(std::string_view s) { return s == "to" || s == "or" || s == "-"; }

bool IsPanSize(std::string_view s) {
  const auto x = s.find('x');
  if (x != std::string_view::npos && AllDigits(s.substr(0, x)) && AllDigits(s.substr(x + 1))) {
    return true;
  }
  for (std::string_view suffix : {"-inch", "-inches", "-in"}) {
    if (s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix &&
        AllDigits(s.substr(0, s.size() - suffix.size()))) {
      return true;
    }
  }
  return false;
}

bool IsCapitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])) != 0 && s != "I";
}

// Length of a number or "number to/or number" run starting at k within the
// sentence [k, last); 0 if none.
std::size_t NumberRun(const std::vector<Token>& t, std::size_t k, std::size_t last) {
  if (k >= last || !IsNumber(t[k].lower)) return 0;
  if (k + 2 < last && IsRangeWord(t[k + 1].lower) && IsNumber(t[k + 2].lower)) return 3;
  return 1;
}

struct Span {
  std::size_t first;  // token indices, inclusive
  std::size_t last;
  EntityCategory category;
};

}  // namespace

std::string CanonicalizeDegree(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, kEscapedDegree.size(), kEscapedDegree) == 0) {
      out += kDegreeSign;
      i += kEscapedDegree.size();
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string NormalizeEntity(std::string_view surface) {
  const std::string text = CanonicalizeDegree(surface);
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (c < 0x80 && !IsAsciiAlnum(c)) continue;  // ASCII punctuation, hyphens
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string EntityKey(std::string_view surface) { return AsciiLower(NormalizeEntity(surface)); }

// ---------------------------------------------------------------------------
// Verb lexicon

VerbLexicon::VerbLexicon()
    : VerbLexicon({"Bake", "Mix", "Stir", "Melt", "Dissolve", "Freeze", "Pour", "Cut", "Cook",
                   "Add", "Spray", "Preheat", "Refrigerate", "Boil", "Beat", "Heat", "Press",
                   "Fill"}) {}

VerbLexicon::VerbLexicon(std::vector<std::string> verbs) {
  for (const auto& v : verbs) {
    std::string key = AsciiLower(NormalizeEntity(v));
    if (!key.empty()) verbs_.insert(std::move(key));
  }
}

VerbLexicon VerbLexicon::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open verb lexicon " + path.string());
  std::vector<std::string> verbs;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (!NormalizeEntity(line).empty()) verbs.push_back(line);
  }
  return VerbLexicon(std::move(verbs));
}

bool VerbLexicon::Contains(std::string_view word) const {
  return verbs_.count(AsciiLower(word)) > 0;
}

const VerbLexicon& DefaultVerbLexicon() {
  static const VerbLexicon lexicon;
  return lexicon;
}

// ---------------------------------------------------------------------------
// Pattern extractor
//
// Per sentence, in this order:
//   temperature  number + degree mark / "degrees"  (+ adjacent verb before)
//   duration     number [to|or number] + time unit, or "overnight"
//                (+ adjacent verb before)
//   pan size     9x13, 9 x 13, 13-inch
//   brand        run of capitalized tokens not at sentence start
//   process      capitalized lexicon verb opening the sentence, emitted when
//                the sentence is the bare verb or names equipment (pan size,
//                brand). A verb governing a temperature or duration is
//                folded into that measurement instead.

EntitySet ExtractPattern(std::string_view direction, const VerbLexicon& lexicon) {
  const std::vector<Token> tokens = Chunk(direction);
  std::vector<bool> used(tokens.size(), false);
  std::vector<Span> spans;

  auto attach_verb = [&](std::size_t start, std::size_t first) {
    if (start > first && !used[start - 1] && lexicon.Contains(tokens[start - 1].lower)) {
      return start - 1;
    }
    return start;
  };
  auto claim = [&](std::size_t a, std::size_t b, EntityCategory cat) {
    for (std::size_t k = a; k <= b; ++k) used[k] = true;
    spans.push_back({a, b, cat});
  };

  for (const auto& [first, last] : Sentences(tokens)) {
    bool has_measure = false;
    bool has_equipment = false;

    for (std::size_t k = first; k < last; ++k) {
      if (used[k]) continue;
      std::size_t end = 0;
      if (IsNumberWithDegree(tokens[k].lower)) {
        end = k;
      } else if (const std::size_t run = NumberRun(tokens, k, last);
                 run > 0 && k + run < last && IsDegreeWord(tokens[k + run].lower)) {
        end = k + run;
      } else {
        continue;
      }
      if (end + 1 < last && IsTemperatureScale(tokens[end + 1].lower)) ++end;
      claim(attach_verb(k, first), end, EntityCategory::kTemperature);
      has_measure = true;
      k = end;
    }

    for (std::size_t k = first; k < last; ++k) {
      if (used[k]) continue;
      if (tokens[k].lower == "overnight") {
        claim(attach_verb(k, first), k, EntityCategory::kDuration);
        has_measure = true;
        continue;
      }
      const std::size_t run = NumberRun(tokens, k, last);
      if (run == 0 || k + run >= last || !IsTimeUnit(tokens[k + run].lower)) continue;
      bool free = true;
      for (std::size_t m = k; m <= k + run; ++m) free = free && !used[m];
      if (!free) continue;
      claim(attach_verb(k, first), k + run, EntityCategory::kDuration);
      has_measure = true;
      k += run;
    }

    for (std::size_t k = first; k < last; ++k) {
      if (used[k]) continue;
      if (IsPanSize(tokens[k].lower)) {
        claim(k, k, EntityCategory::kEquipment);
        has_equipment = true;
      } else if (k + 2 < last && AllDigits(tokens[k].lower) && tokens[k + 1].lower == "x" &&
                 AllDigits(tokens[k + 2].lower) && !used[k + 1] && !used[k + 2]) {
        claim(k, k + 2, EntityCategory::kEquipment);
        has_equipment = true;
        k += 2;
      }
    }

    for (std::size_t k = first + 1; k < last; ++k) {
      if (used[k] || !IsCapitalized(tokens[k].text)) continue;
      std::size_t end = k;
      while (end + 1 < last && !used[end + 1] && IsCapitalized(tokens[end + 1].text)) ++end;
      claim(k, end, EntityCategory::kEquipment);
      has_equipment = true;
      k = end;
    }

    const Token& opener = tokens[first];
    if (!used[first] && opener.sentence_start && IsCapitalized(opener.text) &&
        lexicon.Contains(opener.lower) && !has_measure &&
        (has_equipment || last - first == 1)) {
      claim(first, first, EntityCategory::kProcess);
    }
  }

  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.first < b.first; });
  EntitySet out;
  for (const Span& s : spans) {
    const std::string_view surface =
        direction.substr(tokens[s.first].begin, tokens[s.last].end - tokens[s.first].begin);
    out.Insert(surface, s.category);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gazetteer

void Gazetteer::Add(const std::string& key, std::size_t count) {
  if (key.empty() || count == 0) return;
  terms_[key] += count;
  const std::size_t words = 1 + static_cast<std::size_t>(std::count(key.begin(), key.end(), ' '));
  max_tokens_ = std::max(max_tokens_, words);
}

std::size_t Gazetteer::Frequency(std::string_view key) const {
  const auto it = terms_.find(key);
  return it == terms_.end() ? 0 : it->second;
}

Gazetteer BuildGazetteer(const Corpus& records) {
  Gazetteer gaz;
  for (const RecipeRecord& r : records) {
    std::set<std::string> keys;
    for (const std::string& entry : r.ner) {
      std::string key = EntityKey(entry);
      if (!key.empty()) keys.insert(std::move(key));
    }
    for (const std::string& key : keys) gaz.Add(key);
  }
  return gaz;
}

EntitySet ExtractGazetteer(std::string_view direction, const Gazetteer& gaz) {
  EntitySet out;
  if (gaz.empty()) return out;
  const std::vector<Token> tokens = Chunk(direction);

  // Matching runs over normalized keys inside one sentence at a time.
  struct Key {
    std::string text;
    std::size_t token;
  };
  for (const auto& [first, last] : Sentences(tokens)) {
    std::vector<Key> keys;
    for (std::size_t k = first; k < last; ++k) {
      std::string key = AsciiLower(NormalizeEntity(tokens[k].text));
      if (!key.empty()) keys.push_back({std::move(key), k});
    }
    std::size_t i = 0;
    while (i < keys.size()) {
      const std::size_t longest = std::min(gaz.max_tokens(), keys.size() - i);
      std::size_t matched = 0;
      for (std::size_t len = longest; len >= 1; --len) {
        std::string candidate = keys[i].text;
        for (std::size_t m = 1; m < len; ++m) candidate += " " + keys[i + m].text;
        if (gaz.Contains(candidate)) {
          matched = len;
          break;
        }
      }
      if (matched == 0) {
        ++i;
        continue;
      }
      const Token& a = tokens[keys[i].token];
      const Token& b = tokens[keys[i + matched - 1].token];
      out.Insert(direction.substr(a.begin, b.end - a.begin), EntityCategory::kIngredient);
      if (i > 0 && keys[i - 1].token + 1 == keys[i].token && IsNumber(keys[i - 1].text)) {
        const Token& n = tokens[keys[i - 1].token];
        out.Insert(direction.substr(n.begin, b.end - n.begin), EntityCategory::kQuantity);
      }
      i += matched;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Merge and corpus extension

EntitySet MergeEntities(const std::vector<std::string>& source_ner, const EntitySet& a,
                        const EntitySet& b) {
  EntitySet out;
  for (const std::string& s : source_ner) out.Insert(s, EntityCategory::kIngredient);
  for (const Entity& e : a) out.Insert(e);
  for (const Entity& e : b) out.Insert(e);
  return out;
}

std::string JoinDirections(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (k > 0) out.push_back(' ');
    out += steps[k];
  }
  return out;
}

EntitySet ExtendRecord(const RecipeRecord& record, const Gazetteer& gaz,
                       const VerbLexicon& lexicon) {
  const std::string text = JoinDirections(record.directions);
  return MergeEntities(record.ner, ExtractPattern(text, lexicon), ExtractGazetteer(text, gaz));
}

Corpus ExtendCorpus(Corpus records, const Gazetteer& gaz, const VerbLexicon& lexicon,
                    ExtendOptions options) {
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(records.size())));
  if (threads <= 1) {
    for (RecipeRecord& r : records) r.extended_ner = ExtendRecord(r, gaz, lexicon);
    return records;
  }
  // Each worker owns a contiguous slice of records.
  std::vector<std::thread> workers;
  const std::size_t per = (records.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t lo = w * per;
    const std::size_t hi = std::min(records.size(), lo + per);
    if (lo >= hi) break;
    workers.emplace_back([&records, &gaz, &lexicon, lo, hi] {
      for (std::size_t k = lo; k < hi; ++k) {
        records[k].extended_ner = ExtendRecord(records[k], gaz, lexicon);
      }
    });
  }
  for (auto& t : workers) t.join();
  return records;
}

}  // namespace recipeforge
