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

#include <memory>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "recipeforge/error.hpp"
#include "recipeforge/evaluation.hpp"

using namespace recipeforge;

namespace {

double AucOf(const std::vector<double>& scores, const std::vector<bool>& golds) {
  std::unique_ptr<bool[]> g(new bool[golds.size()]);
  for (std::size_t i = 0; i < golds.size(); ++i) g[i] = golds[i];
  return Auc(ComputeRoc(scores, std::span<const bool>(g.get(), golds.size())));
}

}  // namespace

TEST_CASE("confusion matrix") {
  const std::vector<Genre> all(kAllGenres.begin(), kAllGenres.end());
  const ConfusionMatrix perfect = Confusion(all, all);
  for (Genre g : kAllGenres) {
    for (Genre h : kAllGenres) CHECK(perfect.At(g, h) == (g == h ? 1u : 0u));
  }
  const std::vector<Genre> golds = {Genre::kBakery, Genre::kBakery};
  const std::vector<Genre> preds = {Genre::kBakery, Genre::kDrinks};
  const ConfusionMatrix m = Confusion(golds, preds);
  CHECK(m.At(Genre::kBakery, Genre::kBakery) == 1);
  CHECK(m.At(Genre::kBakery, Genre::kDrinks) == 1);
  CHECK(m.Total() == 2);
  CHECK(Confusion({}, {}).Total() == 0);
  CHECK_THROWS_AS(Confusion(golds, std::vector<Genre>{Genre::kBakery}), Error);
}

TEST_CASE("precision recall f1") {
  const std::vector<Genre> all(kAllGenres.begin(), kAllGenres.end());
  const PrfSummary perfect = PrecisionRecallF1(Confusion(all, all));
  for (const GenreScores& s : perfect.per_genre) {
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
  const std::vector<Genre> golds = {Genre::kBakery, Genre::kBakery};
  const std::vector<Genre> preds = {Genre::kBakery, Genre::kDrinks};
  const PrfSummary s = PrecisionRecallF1(Confusion(golds, preds));
  const GenreScores& b = s.per_genre[0];
  CHECK(b.precision == 1.0);
  CHECK(b.recall == 0.5);
  CHECK(b.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const GenreScores& absent = s.per_genre[GenreIndex(Genre::kFusion)];
  CHECK_FALSE(absent.precision_defined);
  CHECK_FALSE(absent.recall_defined);
  CHECK_FALSE(absent.f1_defined);
  // Drinks: predicted once, never gold -> precision 0, recall undefined.
  const GenreScores& d = s.per_genre[1];
  CHECK(d.precision_defined);
  CHECK(d.precision == 0.0);
  CHECK_FALSE(d.recall_defined);
}

TEST_CASE("auc") {
  CHECK(AucOf({0.9, 0.8, 0.85, 0.7}, {true, true, false, false}) == 0.75);
  CHECK(AucOf({0.9, 0.8, 0.2, 0.1}, {true, true, false, false}) == 1.0);
  CHECK(AucOf({0.4, 0.4, 0.4, 0.4, 0.4}, {true, false, true, false, false}) == 0.5);
  CHECK_THROWS_AS(AucOf({0.1, 0.2}, {true, true}), Error);
  try {
    AucOf({0.1, NAN}, {true, false});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
  }
}

TEST_CASE("auc matches pair counting on random score sets") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> scores(n);
    std::vector<bool> golds(n);
    // Coarse scores force plenty of ties.
    const int levels = 2 + static_cast<int>(rng() % 30);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % levels) / levels;
      golds[i] = rng() % 2;
    }
    golds[0] = true;
    golds[1] = false;
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (golds[i] ? pos : neg).push_back(scores[i]);
    CHECK(std::abs(AucOf(scores, golds) - oracles::PairCountingAuc(pos, neg)) <= 1e-12);
  }
}

TEST_CASE("roc curve shape") {
  const std::vector<double> s = {0.9, 0.8, 0.85, 0.7};
  std::unique_ptr<bool[]> g(new bool[4]{true, true, false, false});
  const RocCurve c = ComputeRoc(s, std::span<const bool>(g.get(), 4));
  REQUIRE(c.points.size() == 5);
  CHECK(c.points.front().fpr == 0.0);
  CHECK(c.points.front().tpr == 0.0);
  CHECK(std::isinf(c.points.front().threshold));
  CHECK(c.points.back().fpr == 1.0);
  CHECK(c.points.back().tpr == 1.0);
}

TEST_CASE("evaluate probabilities") {
  SUBCASE("gold oracle") {
    std::vector<Genre> golds;
    std::vector<Probabilities> probs;
    for (int k = 0; k < 3; ++k) {
      for (Genre g : kAllGenres) {
        golds.push_back(g);
        Probabilities p{};
        p[GenreIndex(g)] = 1.0;
        probs.push_back(p);
      }
    }
    const Evaluation e = EvaluateProbabilities(golds, probs);
    CHECK(e.report.accuracy == 1.0);
    CHECK(e.report.macro_auc == 1.0);
  }
  SUBCASE("uniform random predictor sits near chance") {
    std::mt19937_64 rng(2024);
    std::vector<Genre> golds;
    std::vector<Probabilities> probs;
    for (int k = 0; k < 1000; ++k) {
      for (Genre g : kAllGenres) {
        golds.push_back(g);
        Probabilities p{};
        p[rng() % kGenreCount] = 1.0;
        probs.push_back(p);
      }
    }
    const Evaluation e = EvaluateProbabilities(golds, probs);
    CHECK(e.report.records == 9000);
    CHECK(std::abs(e.report.accuracy - 1.0 / 9.0) <= 0.0099);
    // micro recall equals accuracy
    double tp = 0;
    for (Genre g : kAllGenres) tp += static_cast<double>(e.report.confusion.At(g, g));
    CHECK(tp / 9000.0 == e.report.accuracy);
  }
  SUBCASE("empty input reports no data") {
    const Evaluation e = EvaluateProbabilities({}, {});
    CHECK(e.report.records == 0);
    CHECK(e.report.FormatTable().find("no data") != std::string::npos);
  }
}

TEST_CASE("metrics report json round trip and files") {
  const std::vector<Genre> golds = {Genre::kBakery, Genre::kDrinks, Genre::kBakery, Genre::kMeal};
  std::vector<Probabilities> probs(4);
  probs[0][0] = 0.7, probs[0][1] = 0.3;
  probs[1][1] = 0.6, probs[1][0] = 0.4;
  probs[2][1] = 0.8, probs[2][0] = 0.2;
  probs[3][6] = 1.0;
  Evaluation e = EvaluateProbabilities(golds, probs);
  e.report.model = "nb";
  e.report.feature = "title";
  e.report.split = "test";
  const MetricsReport back = MetricsReport::FromJson(e.report.ToJson());
  CHECK(back.ToJson() == e.report.ToJson());
  CHECK(back.confusion == e.report.confusion);
  CHECK(back.accuracy == 0.75);
  CHECK_FALSE(back.auc[GenreIndex(Genre::kFusion)].has_value());

  const auto dir = fixtures::TempDir("eval_files");
  WriteEvaluation(e, dir);
  CHECK(std::filesystem::exists(dir / "metrics.json"));
  CHECK(std::filesystem::exists(dir / "metrics.txt"));
  CHECK(std::filesystem::exists(dir / "roc_bakery.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "roc_fusion.csv"));
  CHECK(fixtures::Slurp(dir / "roc_bakery.csv").rfind("threshold,fpr,tpr\n", 0) == 0);
}
