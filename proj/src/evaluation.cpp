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

#include "recipeforge/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "recipeforge/error.hpp"
#include "recipeforge/models/predict.hpp"

namespace recipeforge {

std::size_t ConfusionMatrix::Total() const {
  std::size_t t = 0;
  for (const auto& row : counts) t += std::accumulate(row.begin(), row.end(), std::size_t{0});
  return t;
}

std::size_t ConfusionMatrix::Trace() const {
  std::size_t t = 0;
  for (int g = 0; g < kGenreCount; ++g) t += counts[g][g];
  return t;
}

std::size_t ConfusionMatrix::RowSum(Genre gold) const {
  const auto& row = counts[GenreIndex(gold)];
  return std::accumulate(row.begin(), row.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::ColumnSum(Genre pred) const {
  std::size_t t = 0;
  for (const auto& row : counts) t += row[GenreIndex(pred)];
  return t;
}

ConfusionMatrix Confusion(std::span<const Genre> golds, std::span<const Genre> preds) {
  if (golds.size() != preds.size()) {
    Fail(ErrorKind::kValidation, "confusion: " + std::to_string(golds.size()) + " golds but " +
                                     std::to_string(preds.size()) + " predictions");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (!GenreFromId(GenreId(golds[i])) || !GenreFromId(GenreId(preds[i]))) {
      Fail(ErrorKind::kValidation, "confusion: label outside 1..9 at position " + std::to_string(i));
    }
    ++m.counts[GenreIndex(golds[i])][GenreIndex(preds[i])];
  }
  return m;
}

PrfSummary PrecisionRecallF1(const ConfusionMatrix& m) {
  PrfSummary s;
  std::size_t np = 0, nr = 0, nf = 0;
  for (Genre g : kAllGenres) {
    GenreScores& out = s.per_genre[GenreIndex(g)];
    const double tp = static_cast<double>(m.At(g, g));
    const std::size_t col = m.ColumnSum(g);
    const std::size_t row = m.RowSum(g);
    out.support = row;
    if (col > 0) {
      out.precision = tp / static_cast<double>(col);
      out.precision_defined = true;
      s.macro_precision += out.precision;
      ++np;
    }
    if (row > 0) {
      out.recall = tp / static_cast<double>(row);
      out.recall_defined = true;
      s.macro_recall += out.recall;
      ++nr;
    }
    if (col > 0 || row > 0) {
      const double sum = out.precision + out.recall;
      out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
      out.f1_defined = true;
      s.macro_f1 += out.f1;
      ++nf;
    }
  }
  if (np) s.macro_precision /= static_cast<double>(np);
  if (nr) s.macro_recall /= static_cast<double>(nr);
  if (nf) s.macro_f1 /= static_cast<double>(nf);
  return s;
}

RocCurve ComputeRoc(std::span<const double> scores, std::span<const bool> golds,
                    const std::string& what) {
  if (scores.size() != golds.size()) {
    Fail(ErrorKind::kValidation, "roc: scores and golds differ in length");
  }
  std::size_t pos = 0;
  for (bool b : golds) pos += b;
  const std::size_t neg = golds.size() - pos;
  if (pos == 0 || neg == 0) {
    Fail(ErrorKind::kValidation, "roc for " + what + ": golds contain only " +
                                     (pos == 0 ? "negatives" : "positives"));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RocCurve c;
  c.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double t = scores[order[k]];
    if (!std::isfinite(t)) Fail(ErrorKind::kNumeric, "roc for " + what + ": non-finite score");
    while (k < order.size() && scores[order[k]] == t) {
      (golds[order[k]] ? tp : fp) += 1;
      ++k;
    }
    c.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                        static_cast<double>(tp) / static_cast<double>(pos), t});
  }
  return c;
}

double Auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const RocPoint& a = curve.points[k - 1];
    const RocPoint& b = curve.points[k];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json ScoresJson(const GenreScores& s) {
  ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  j["precision_defined"] = s.precision_defined;
  j["recall_defined"] = s.recall_defined;
  j["f1_defined"] = s.f1_defined;
  j["support"] = s.support;
  return j;
}

}  // namespace

std::string MetricsReport::ToJson() const {
  ordered_json j;
  j["model"] = model;
  j["feature"] = feature;
  j["split"] = split;
  j["records"] = records;
  j["accuracy"] = accuracy;
  ordered_json genres = ordered_json::array();
  for (Genre g : kAllGenres) {
    ordered_json e = ScoresJson(prf.per_genre[GenreIndex(g)]);
    e["genre"] = std::string(GenreName(g));
    e["label"] = GenreId(g);
    const auto& a = auc[GenreIndex(g)];
    e["auc"] = a ? ordered_json(*a) : ordered_json(nullptr);
    genres.push_back(std::move(e));
  }
  j["genres"] = std::move(genres);
  j["macro_precision"] = prf.macro_precision;
  j["macro_recall"] = prf.macro_recall;
  j["macro_f1"] = prf.macro_f1;
  j["macro_auc"] = macro_auc;
  ordered_json rows = ordered_json::array();
  for (const auto& row : confusion.counts) rows.push_back(row);
  j["confusion"] = std::move(rows);
  return j.dump(2);
}

MetricsReport MetricsReport::FromJson(const std::string& text) {
  MetricsReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.model = j.at("model").get<std::string>();
    r.feature = j.at("feature").get<std::string>();
    r.split = j.at("split").get<std::string>();
    r.records = j.at("records").get<std::size_t>();
    r.accuracy = j.at("accuracy").get<double>();
    const auto& genres = j.at("genres");
    if (genres.size() != kGenreCount) Fail(ErrorKind::kFormat, "report must list 9 genres");
    for (std::size_t k = 0; k < kGenreCount; ++k) {
      const auto& e = genres[k];
      GenreScores& s = r.prf.per_genre[k];
      s.precision = e.at("precision").get<double>();
      s.recall = e.at("recall").get<double>();
      s.f1 = e.at("f1").get<double>();
      s.precision_defined = e.at("precision_defined").get<bool>();
      s.recall_defined = e.at("recall_defined").get<bool>();
      s.f1_defined = e.at("f1_defined").get<bool>();
      s.support = e.at("support").get<std::size_t>();
      if (!e.at("auc").is_null()) r.auc[k] = e.at("auc").get<double>();
    }
    r.prf.macro_precision = j.at("macro_precision").get<double>();
    r.prf.macro_recall = j.at("macro_recall").get<double>();
    r.prf.macro_f1 = j.at("macro_f1").get<double>();
    r.macro_auc = j.at("macro_auc").get<double>();
    const auto& rows = j.at("confusion");
    if (rows.size() != kGenreCount) Fail(ErrorKind::kFormat, "confusion must be 9x9");
    for (std::size_t g = 0; g < kGenreCount; ++g) {
      if (rows[g].size() != kGenreCount) Fail(ErrorKind::kFormat, "confusion must be 9x9");
      for (std::size_t p = 0; p < kGenreCount; ++p) {
        r.confusion.counts[g][p] = rows[g][p].get<std::size_t>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("bad metrics report: ") + e.what());
  }
  return r;
}

std::string MetricsReport::FormatTable() const {
  std::ostringstream out;
  char buf[160];
  out << "model " << model << "  feature " << feature << "  split " << split << "  records "
      << records << "\n";
  if (records == 0) {
    out << "no data\n";
    return out.str();
  }
  std::snprintf(buf, sizeof buf, "accuracy %.4f\n\n", accuracy);
  out << buf;
  std::snprintf(buf, sizeof buf, "%-12s %9s %9s %9s %9s %8s\n", "genre", "precision", "recall",
                "f1", "auc", "support");
  out << buf;
  auto cell = [](double v, bool defined) {
    char b[16];
    if (!defined) return std::string("-");
    std::snprintf(b, sizeof b, "%.4f", v);
    return std::string(b);
  };
  for (Genre g : kAllGenres) {
    const GenreScores& s = prf.per_genre[GenreIndex(g)];
    const auto& a = auc[GenreIndex(g)];
    std::snprintf(buf, sizeof buf, "%-12s %9s %9s %9s %9s %8zu\n", std::string(GenreName(g)).c_str(),
                  cell(s.precision, s.precision_defined).c_str(),
                  cell(s.recall, s.recall_defined).c_str(), cell(s.f1, s.f1_defined).c_str(),
                  cell(a.value_or(0.0), a.has_value()).c_str(), s.support);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-12s %9.4f %9.4f %9.4f %9.4f %8zu\n", "macro",
                prf.macro_precision, prf.macro_recall, prf.macro_f1, macro_auc, records);
  out << buf;
  return out.str();
}

Evaluation EvaluateProbabilities(std::span<const Genre> golds,
                                 std::span<const Probabilities> probs) {
  if (golds.size() != probs.size()) {
    Fail(ErrorKind::kValidation, "evaluation: golds and probabilities differ in length");
  }
  std::vector<Genre> preds;
  preds.reserve(probs.size());
  for (const Probabilities& p : probs) preds.push_back(PredictGenre(p));
  Evaluation e;
  MetricsReport& r = e.report;
  r.records = golds.size();
  r.confusion = Confusion(golds, preds);
  r.accuracy = r.records ? static_cast<double>(r.confusion.Trace()) / static_cast<double>(r.records)
                         : 0.0;
  r.prf = PrecisionRecallF1(r.confusion);
  std::size_t defined = 0;
  for (Genre g : kAllGenres) {
    const int k = GenreIndex(g);
    std::vector<double> scores(probs.size());
    // std::vector<bool> is not contiguous, hence the plain array.
    std::unique_ptr<bool[]> positive(new bool[golds.size()]);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      scores[i] = probs[i][k];
      positive[i] = golds[i] == g;
      pos += positive[i];
    }
    if (pos == 0 || pos == golds.size()) continue;
    RocCurve c = ComputeRoc(scores, std::span<const bool>(positive.get(), golds.size()),
                            std::string(GenreName(g)));
    r.auc[k] = Auc(c);
    r.macro_auc += *r.auc[k];
    ++defined;
    e.curves[k] = std::move(c);
  }
  if (defined) r.macro_auc /= static_cast<double>(defined);
  return e;
}

Evaluation Evaluate(const AnyModel& model, const Vocabulary& vocab, const Corpus& records,
                    FeatureSet feature_set, const std::string& split, std::size_t max_len) {
  if (max_len == 0) max_len = DefaultMaxLen(feature_set);
  std::vector<std::string> texts;
  std::vector<Genre> golds;
  texts.reserve(records.size());
  for (const RecipeRecord& r : records) {
    if (!r.genre) {
      Fail(ErrorKind::kValidation, "record " + std::to_string(r.id) + " has no genre to evaluate");
    }
    texts.push_back(ComposeFeatureText(r, feature_set));
    golds.push_back(*r.genre);
  }
  std::vector<Probabilities> probs;
  probs.reserve(records.size());
  for (const std::string& t : texts) probs.push_back(PredictText(model, t, vocab, max_len));
  Evaluation e = EvaluateProbabilities(golds, probs);
  e.report.model = std::string(ModelKindName(KindOf(model)));
  e.report.feature = std::string(FeatureSetName(feature_set));
  e.report.split = split;
  return e;
}

void WriteEvaluation(const Evaluation& eval, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) Fail(ErrorKind::kIo, "cannot write " + (dir / name).string());
    out << body;
  };
  write("metrics.json", eval.report.ToJson() + "\n");
  write("metrics.txt", eval.report.FormatTable());
  for (Genre g : kAllGenres) {
    const auto& c = eval.curves[GenreIndex(g)];
    if (!c) continue;
    std::string name(GenreName(g));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    std::ostringstream csv;
    csv << "threshold,fpr,tpr\n";
    char buf[96];
    for (const RocPoint& p : c->points) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.threshold, p.fpr, p.tpr);
      csv << buf;
    }
    write("roc_" + name + ".csv", csv.str());
  }
}

}  // namespace recipeforge
