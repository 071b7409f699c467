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

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "recipeforge/active_learning.hpp"
#include "recipeforge/error.hpp"

using namespace recipeforge;

namespace {

// Softmax model over `dim` features that predicts `vote[t]` for an input
// holding feature t, with probability q.
LinearModel Voter(std::size_t dim, const std::vector<Genre>& vote, double q = 0.9) {
  LinearModel m(LinearKind::kSoftmaxRegression, dim);
  const double logit = std::log(q * (kGenreCount - 1) / (1.0 - q));
  for (std::size_t t = 0; t < dim; ++t) m.Weight(GenreIndex(vote[t]), static_cast<TermId>(t)) = logit;
  return m;
}

PoolItem Item(RecordId id, TermId t) {
  PoolItem p;
  p.id = id;
  p.features.entries = {{t, 1.0}};
  return p;
}

// Seeds labeled, the rest of each genre unlabeled.
Corpus SeededPool(std::size_t per_genre, std::size_t seeds) {
  Corpus c = fixtures::PerGenre(per_genre);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i % per_genre >= seeds) {
      c[i].genre.reset();
      c[i].provenance = Provenance::kUnlabeled;
    }
  }
  return c;
}

std::map<RecordId, Genre> Truth(const Corpus& c) {
  std::map<RecordId, Genre> t;
  const Corpus full = fixtures::PerGenre(c.size() / kGenreCount);
  for (const auto& r : full) t[r.id] = *r.genre;
  return t;
}

}  // namespace

TEST_CASE("vote entropy") {
  using G = Genre;
  CHECK(VoteEntropy(std::vector<G>{G::kNonVeg, G::kNonVeg, G::kNonVeg}) == 0.0);
  CHECK(VoteEntropy(std::vector<G>{G::kBakery, G::kBakery, G::kDrinks}) == doctest::Approx(0.6365).epsilon(1e-4));
  const std::vector<G> all(kAllGenres.begin(), kAllGenres.end());
  CHECK(VoteEntropy(all) == doctest::Approx(std::log(9.0)).epsilon(1e-15));
  CHECK(VoteEntropy(std::vector<G>{G::kBakery, G::kBakery, G::kDrinks}) ==
        VoteEntropy(std::vector<G>{G::kMeal, G::kSides, G::kSides}));
  CHECK_THROWS_AS(VoteEntropy(std::vector<G>{G::kBakery}), Error);
}

TEST_CASE("query selection") {
  const std::size_t dim = 4;
  const std::vector<Genre> base = {Genre::kBakery, Genre::kDrinks, Genre::kMeal, Genre::kSides};
  std::vector<Genre> other = base;
  other[2] = Genre::kFusion;  // members disagree only on feature 2
  const Committee c({Voter(dim, base), Voter(dim, base), Voter(dim, other)});
  const std::vector<PoolItem> pool = {Item(10, 0), Item(11, 1), Item(12, 2), Item(13, 3), Item(14, 0)};
  CHECK(SelectQueries(c, pool, 1) == std::vector<RecordId>{12});
  CHECK(SelectQueries(c, pool, 3) == std::vector<RecordId>{12, 10, 11});
  CHECK(SelectQueries(c, pool, 99).size() == 5);

  const Committee unanimous({Voter(dim, base), Voter(dim, base)});
  CHECK(SelectQueries(unanimous, pool, 2) == std::vector<RecordId>{10, 11});
  CHECK(SelectQueries(unanimous, {}, 2).empty());
}

TEST_CASE("query selection matches an exhaustive sort") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 3 + rng() % 6;
    std::vector<AnyModel> members;
    for (std::size_t k = 0, n = 2 + rng() % 4; k < n; ++k) {
      std::vector<Genre> vote(dim);
      for (auto& g : vote) g = GenreFromIndex(static_cast<int>(rng() % 4));
      members.push_back(Voter(dim, vote));
    }
    const Committee c(members);
    std::vector<PoolItem> pool;
    const std::size_t n = 1 + rng() % 1000;
    for (std::size_t i = 0; i < n; ++i) pool.push_back(Item(static_cast<RecordId>(rng() % 100000), static_cast<TermId>(rng() % dim)));
    const std::size_t b = rng() % (n + 5);
    CHECK(SelectQueries(c, pool, b) == oracles::ExhaustiveQueries(c, pool, b));
  }
}

TEST_CASE("auto labeling") {
  const std::vector<Genre> v = {Genre::kCereal, Genre::kMeal};
  const std::vector<PoolItem> pool = {Item(1, 0)};
  SUBCASE("confident unanimous committee labels") {
    const Committee c({Voter(2, v, 0.995), Voter(2, v, 0.995)});
    const auto labels = AutoLabelPool(c, pool, 0.99);
    REQUIRE(labels.size() == 1);
    CHECK(labels[0].label == Genre::kCereal);
    CHECK(labels[0].confidence == doctest::Approx(0.995));
  }
  SUBCASE("unanimous but below threshold") {
    const Committee c({Voter(2, v, 0.97), Voter(2, v, 0.97)});
    CHECK(AutoLabelPool(c, pool, 0.99).empty());
    CHECK(AutoLabelPool(c, pool, 1.0).empty());
  }
  SUBCASE("split committee never labels") {
    const Committee c({Voter(2, v, 0.999), Voter(2, {Genre::kMeal, Genre::kMeal}, 0.999)});
    CHECK(AutoLabelPool(c, pool, 0.01).empty());
  }
  SUBCASE("threshold range") {
    const Committee c({Voter(2, v), Voter(2, v)});
    CHECK_THROWS_AS(AutoLabelPool(c, pool, 0.0), Error);
    CHECK_THROWS_AS(AutoLabelPool(c, pool, 1.5), Error);
  }
}

TEST_CASE("committee construction rules") {
  CHECK_THROWS_AS(Committee({Voter(2, {Genre::kMeal, Genre::kMeal})}), Error);
  CHECK_THROWS_AS(Committee({Voter(2, {Genre::kMeal, Genre::kMeal}), Voter(3, {Genre::kMeal, Genre::kMeal, Genre::kMeal})}),
                  Error);
}

TEST_CASE("annotation session") {
  SessionConfig cfg;
  cfg.batch = 3;
  cfg.seed = 1;

  SUBCASE("round on an empty pool") {
    AnnotationSession s(fixtures::PerGenre(3), cfg);
    CHECK(s.pool_size() == 0);
    CHECK(s.pending().empty());
    const RoundSummary r = s.RunRound({});
    CHECK(r.queried.empty());
    CHECK(r.auto_labeled == 0);
    CHECK(s.round() == 1);
    CHECK(s.records() == fixtures::PerGenre(3));
  }

  SUBCASE("separable pool empties in one round at tau 0.5") {
    cfg.tau = 0.5;
    const Corpus c = SeededPool(8, 3);
    AnnotationSession s(c, cfg);
    CHECK(s.pool_size() == 45);
    const auto truth = Truth(c);
    std::map<RecordId, Genre> labels;
    for (RecordId id : s.pending()) labels[id] = truth.at(id);
    const RoundSummary r = s.RunRound(labels);
    CHECK(r.human_labeled == 3);
    CHECK(s.pool_size() == 0);
    for (const AutoLabel& a : r.auto_labels) CHECK(a.label == truth.at(a.id));
    CHECK(s.CountProvenance(Provenance::kMachine) == 42);
    CHECK(s.human_labeled_total() == 3);
    CHECK(s.seed_labeled() == 27);
  }

  SUBCASE("same inputs, same query sequence") {
    const Corpus c = SeededPool(10, 2);
    const auto truth = Truth(c);
    auto run = [&] {
      AnnotationSession s(c, cfg);
      std::vector<RecordId> seen;
      for (int round = 0; round < 3 && s.pool_size() > 0; ++round) {
        seen.insert(seen.end(), s.pending().begin(), s.pending().end());
        std::map<RecordId, Genre> labels;
        for (RecordId id : s.pending()) labels[id] = truth.at(id);
        s.RunRound(labels);
      }
      return seen;
    };
    const auto first = run();
    CHECK_FALSE(first.empty());
    CHECK(run() == first);
  }

  SUBCASE("invalid labels leave the session untouched") {
    const Corpus c = SeededPool(6, 3);
    AnnotationSession s(c, cfg);
    const auto pending = s.pending();
    RecordId not_pending = -1;
    for (RecordId id : s.pool_ids()) {
      if (std::find(pending.begin(), pending.end(), id) == pending.end()) not_pending = id;
    }
    CHECK_THROWS_AS(s.RunRound({{not_pending, Genre::kMeal}}), Error);
    CHECK_THROWS_AS(s.RunRound({}, 0.0), Error);
    CHECK(s.round() == 0);
    CHECK(s.pending() == pending);
    CHECK(s.records() == c);
  }

  SUBCASE("checkpoint and resume continue identically") {
    const Corpus c = SeededPool(10, 2);
    const auto truth = Truth(c);
    auto label = [&](const AnnotationSession& s) {
      std::map<RecordId, Genre> l;
      for (RecordId id : s.pending()) l[id] = truth.at(id);
      return l;
    };
    AnnotationSession a(c, cfg);
    a.RunRound(label(a));
    std::stringstream ckpt;
    a.Save(ckpt);
    AnnotationSession b = AnnotationSession::Load(ckpt);
    CHECK(b.round() == a.round());
    CHECK(b.pending() == a.pending());
    CHECK(b.records() == a.records());
    CHECK(b.human_labeled_total() == a.human_labeled_total());
    const RoundSummary ra = a.RunRound(label(a));
    const RoundSummary rb = b.RunRound(label(b));
    CHECK(ra.queried == rb.queried);
    CHECK(ra.auto_labeled == rb.auto_labeled);
    CHECK(a.records() == b.records());
  }

  SUBCASE("duplicate ids are rejected") {
    Corpus c = SeededPool(4, 3);
    c[1].id = c[0].id;
    CHECK_THROWS_AS(AnnotationSession(c, cfg), Error);
  }
}

TEST_CASE("fleiss kappa") {
  SUBCASE("perfect agreement") {
    KappaTable t;
    t.AddItem({3, 0, 0, 0, 0, 0, 0, 0, 0});
    t.AddItem({0, 3, 0, 0, 0, 0, 0, 0, 0});
    const KappaResult k = FleissKappa(t);
    CHECK_FALSE(k.degenerate);
    CHECK(k.kappa == 1.0);
  }
  SUBCASE("systematic disagreement") {
    KappaTable t;
    t.AddItem({1, 1, 0, 0, 0, 0, 0, 0, 0});
    t.AddItem({1, 1, 0, 0, 0, 0, 0, 0, 0});
    const KappaResult k = FleissKappa(t);
    CHECK(k.mean_agreement == 0.0);
    CHECK(k.chance_agreement == 0.5);
    CHECK(k.kappa == -1.0);
  }
  SUBCASE("everyone picks one genre") {
    KappaTable t;
    t.AddItem({2, 0, 0, 0, 0, 0, 0, 0, 0});
    t.AddItem({2, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK(FleissKappa(t).degenerate);
  }
  SUBCASE("random tables match the direct formula") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t N = 2 + rng() % 49;
      const std::size_t n = 2 + rng() % 6;
      KappaTable t;
      std::vector<std::vector<std::size_t>> rows;
      for (std::size_t i = 0; i < N; ++i) {
        std::vector<std::size_t> row(kGenreCount, 0);
        for (std::size_t r = 0; r < n; ++r) ++row[rng() % (1 + trial % kGenreCount)];
        rows.push_back(row);
        t.AddItem(row);
      }
      const KappaResult k = FleissKappa(t);
      if (k.degenerate) continue;
      CHECK(std::abs(k.kappa - oracles::FleissKappaDirect(rows)) <= 1e-12);
    }
  }
  SUBCASE("table rules") {
    KappaTable t;
    t.AddItem({1, 1, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(t.AddItem({1, 0, 0, 0, 0, 0, 0, 0}), Error);
    // uneven rater counts only show up once the table is scored
    t.AddItem({3, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(FleissKappa(t), Error);
  }
  SUBCASE("csv") {
    std::istringstream in("item_id,rater_id,label\na,r1,1\na,r2,1\nb,r1,2\nb,r2,2\n");
    const KappaTable t = ReadKappaCsv(in);
    CHECK(t.items() == 2);
    CHECK(t.Raters() == 2);
    CHECK(FleissKappa(t).kappa == 1.0);
    std::istringstream dup("item_id,rater_id,label\na,r1,1\na,r1,2\n");
    CHECK_THROWS_AS(ReadKappaCsv(dup), Error);
    std::istringstream bad("item_id,rater_id,label\na,r1,10\n");
    CHECK_THROWS_AS(ReadKappaCsv(bad), Error);
  }
}
