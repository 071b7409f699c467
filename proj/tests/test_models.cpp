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

#include "oracles.hpp"
#include "recipeforge/error.hpp"
#include "recipeforge/models/model_io.hpp"
#include "recipeforge/models/predict.hpp"

using namespace recipeforge;

namespace {

CountVector Counts(const std::vector<int>& tokens) {
  std::map<TermId, double> m;
  for (int t : tokens) m[t] += 1.0;
  CountVector v;
  for (const auto& [k, c] : m) v.entries.emplace_back(k, c);
  return v;
}

VectorDataset Dataset(const std::vector<std::vector<int>>& docs, const std::vector<Genre>& labels, std::size_t V) {
  VectorDataset d;
  for (const auto& doc : docs) d.inputs.push_back(Counts(doc));
  d.labels = labels;
  d.dim = V;
  return d;
}

// Class g owns term g: one-hot, orthogonal vocabularies.
VectorDataset OneHotGenres(std::size_t copies = 1, double scale = 1.0) {
  VectorDataset d;
  d.dim = kGenreCount;
  for (std::size_t c = 0; c < copies; ++c) {
    for (Genre g : kAllGenres) {
      CountVector v;
      v.entries.emplace_back(GenreIndex(g), scale);
      d.inputs.push_back(v);
      d.labels.push_back(g);
    }
  }
  return d;
}

TrainConfig Plain(double lr, std::size_t epochs, std::size_t batch = 4) {
  TrainConfig c;
  c.learning_rate = lr;
  c.epochs = epochs;
  c.batch_size = batch;
  c.warmup_fraction = 0.0;
  c.weight_decay = 0.0;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("naive bayes worked example") {
  // class 1 "sugar sugar", class 2 "salt"; sugar=0, salt=1
  const auto data = Dataset({{0, 0}, {1}}, {Genre::kBakery, Genre::kDrinks}, 2);
  const NaiveBayesModel m = NaiveBayesModel::Train(data, 1.0);
  CHECK(std::exp(m.LogLikelihood(Genre::kBakery, 0)) == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
  const Probabilities p = m.PredictProba(Counts({0}));
  CHECK(p[0] == doctest::Approx(9.0 / 13.0).epsilon(1e-14));
  const Probabilities prior = m.PredictProba(CountVector{});
  CHECK(prior[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(prior[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(prior[2] == 0.0);

  const auto doubled = Dataset({{0, 0}, {1}, {0, 0}, {1}},
                               {Genre::kBakery, Genre::kDrinks, Genre::kBakery, Genre::kDrinks}, 2);
  const Probabilities p2 = NaiveBayesModel::Train(doubled, 1.0).PredictProba(Counts({0, 1, 1}));
  const Probabilities p1 = m.PredictProba(Counts({0, 1, 1}));
  // Smoothing is per count, so duplicating shifts the estimates slightly;
  // the ratios match once alpha scales with the data.
  const Probabilities p3 = NaiveBayesModel::Train(doubled, 2.0).PredictProba(Counts({0, 1, 1}));
  for (int g = 0; g < kGenreCount; ++g) CHECK(p3[g] == doctest::Approx(p1[g]).epsilon(1e-12));
  CHECK(p2[0] > 0.0);
}

TEST_CASE("naive bayes single class prior") {
  const auto data = Dataset({{0}, {1}}, {Genre::kMeal, Genre::kMeal}, 2);
  const NaiveBayesModel m = NaiveBayesModel::Train(data, 1.0);
  CHECK(m.log_prior()[GenreIndex(Genre::kMeal)] == 0.0);
  CHECK(NaiveBayesModel::Train(data, 1.0).log_likelihood() == m.log_likelihood());
}

TEST_CASE("naive bayes matches brute-force enumeration") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t V = 1 + rng() % 6;
    const std::size_t n = 1 + rng() % 5;
    std::vector<std::vector<int>> docs(n);
    std::vector<Genre> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = GenreFromIndex(static_cast<int>(rng() % kGenreCount));
      const std::size_t len = rng() % 7;
      for (std::size_t k = 0; k < len; ++k) docs[i].push_back(static_cast<int>(rng() % V));
    }
    const double alpha = 0.1 + static_cast<double>(rng() % 20) / 10.0;
    std::vector<int> query;
    for (std::size_t k = 0, len = rng() % 7; k < len; ++k) query.push_back(static_cast<int>(rng() % V));
    const auto expect = oracles::NaiveBayesPosterior(docs, labels, V, alpha, query);
    const auto got = NaiveBayesModel::Train(Dataset(docs, labels, V), alpha).PredictProba(Counts(query));
    for (int g = 0; g < kGenreCount; ++g) CHECK(std::abs(got[g] - expect[g]) <= 1e-12);
  }
}

TEST_CASE("linear gradients match central differences") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + rng() % 5;
    std::vector<CountVector> xs;
    std::vector<Genre> ys;
    for (std::size_t i = 0, n = 2 + rng() % 4; i < n; ++i) {
      std::vector<int> toks;
      for (std::size_t k = 0, len = 1 + rng() % 5; k < len; ++k) toks.push_back(static_cast<int>(rng() % dim));
      xs.push_back(Counts(toks));
      ys.push_back(GenreFromIndex(static_cast<int>(rng() % kGenreCount)));
    }
    for (LinearKind kind : {LinearKind::kSoftmaxRegression, LinearKind::kOvrHinge}) {
      LinearModel m(kind, dim);
      do {
        for (double& w : m.weights()) w = normal(rng);
        for (double& b : m.bias()) b = normal(rng);
      } while (kind == LinearKind::kOvrHinge && oracles::HingeKinkDistance(m, xs, ys) < 1e-2);
      const bool hinge = kind == LinearKind::kOvrHinge;
      const LinearGradient g = hinge ? HingeLossGradient(m, xs, ys) : SoftmaxLossGradient(m, xs, ys);
      auto loss = [&] { return hinge ? oracles::HingeLoss(m, xs, ys) : oracles::SoftmaxLoss(m, xs, ys); };
      CHECK(g.loss == doctest::Approx(loss()).epsilon(1e-12));
      for (std::size_t k = 0; k < m.weights().size(); ++k) {
        const double num = oracles::CentralDifference(&m.weights()[k], loss);
        CHECK(oracles::RelativeError(g.weights[k], num) <= 1e-4);
      }
      for (int b = 0; b < kGenreCount; ++b) {
        const double num = oracles::CentralDifference(&m.bias()[b], loss);
        CHECK(oracles::RelativeError(g.bias[b], num) <= 1e-4);
      }
    }
  }
}

TEST_CASE("mlp gradients match central differences") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    MlpShape shape;
    shape.vocab_size = 5 + rng() % 4;
    shape.embedding_dim = 2 + rng() % 3;
    shape.hidden = {2 + rng() % 4};
    if (trial % 2) shape.hidden.push_back(2 + rng() % 3);
    MlpModel m(shape);
    for (double& p : m.parameters()) p = normal(rng);
    std::vector<TokenSequence> xs;
    std::vector<Genre> ys;
    for (int i = 0; i < 3; ++i) {
      TokenSequence s = {kClsId};
      for (std::size_t k = 0, len = 1 + rng() % 3; k < len; ++k) {
        s.push_back(static_cast<TermId>(kFirstTermId + rng() % (shape.vocab_size - kFirstTermId)));
      }
      s.push_back(kSepId);
      s.push_back(kPadId);
      xs.push_back(s);
      ys.push_back(GenreFromIndex(static_cast<int>(rng() % kGenreCount)));
    }
    const MlpGradient g = MlpLossGradient(m, xs, ys);
    auto loss = [&] { return oracles::MlpLoss(m, xs, ys); };
    CHECK(g.loss == doctest::Approx(loss()).epsilon(1e-12));
    for (std::size_t k = 0; k < m.parameters().size(); ++k) {
      const double num = oracles::CentralDifference(&m.parameters()[k], loss);
      CHECK(oracles::RelativeError(g.gradient[k], num) <= 1e-4);
    }
  }
}

TEST_CASE("softmax regression") {
  SUBCASE("separable two-class toy") {
    VectorDataset d;
    d.dim = 2;
    const double pts[][2] = {{2, 0}, {3, 1}, {2, 1}, {0, 2}, {1, 3}, {0, 3}};
    for (int i = 0; i < 6; ++i) {
      CountVector v;
      v.entries = {{0, pts[i][0]}, {1, pts[i][1]}};
      d.inputs.push_back(v);
      d.labels.push_back(i < 3 ? Genre::kBakery : Genre::kDrinks);
    }
    TrainConfig cfg = LinearTrainDefaults();
    cfg.epochs = 200;
    cfg.learning_rate = 0.1;
    TrainLog log;
    const LinearModel m = TrainLogReg(d, cfg, &log);
    CHECK(log.epochs.back().train_accuracy == 1.0);
    CHECK(TrainLogReg(d, cfg).weights() == m.weights());
  }
  SUBCASE("zero epochs keeps the initialization") {
    TrainConfig cfg = Plain(0.1, 0);
    const LinearModel m = TrainLogReg(OneHotGenres(), cfg);
    CHECK(m == LinearModel(LinearKind::kSoftmaxRegression, kGenreCount));
  }
}

TEST_CASE("linear svm") {
  SUBCASE("one-hot genres reach zero hinge loss") {
    const VectorDataset d = OneHotGenres(2);
    const LinearModel m = TrainSvm(d, Plain(0.5, 200));
    CHECK(oracles::HingeLoss(m, d.inputs, d.labels) <= 1e-9);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(PredictGenre(m.Scores(d.inputs[i])) == d.labels[i]);
  }
  SUBCASE("single point") {
    VectorDataset d;
    d.dim = 3;
    CountVector v;
    v.entries = {{1, 1.0}};
    d.inputs = {v};
    d.labels = {Genre::kCereal};
    const LinearModel m = TrainSvm(d, Plain(0.5, 20, 1));
    CHECK(PredictGenre(m.Scores(v)) == Genre::kCereal);
  }
  SUBCASE("scaling inputs keeps predictions") {
    const VectorDataset d1 = OneHotGenres(2, 1.0);
    const VectorDataset d2 = OneHotGenres(2, 2.0);
    const LinearModel m1 = TrainSvm(d1, Plain(0.5, 200));
    const LinearModel m2 = TrainSvm(d2, Plain(0.5, 200));
    for (std::size_t i = 0; i < d1.size(); ++i) {
      CHECK(PredictGenre(m1.Scores(d1.inputs[i])) == PredictGenre(m2.Scores(d2.inputs[i])));
    }
  }
  SUBCASE("calibrated probabilities favour the predicted genre") {
    const VectorDataset d = OneHotGenres(3);
    const LinearModel m = TrainSvm(d, Plain(0.5, 100));
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Probabilities p = m.PredictProba(d.inputs[i]);
      CHECK(p[GenreIndex(d.labels[i])] > 0.5);
      double sum = 0.0;
      for (double v : p) sum += v;
      CHECK(sum == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("platt fit is a local minimum of the smoothed log loss") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> f;
  std::vector<char> pos_c;
  for (int i = 0; i < 60; ++i) {
    const bool pos = i % 3 == 0;
    f.push_back(normal(rng) + (pos ? 1.0 : -1.0));
    pos_c.push_back(pos);
  }
  std::unique_ptr<bool[]> pos(new bool[f.size()]);
  double n1 = 0;
  for (std::size_t i = 0; i < f.size(); ++i) n1 += (pos[i] = pos_c[i]);
  const double n0 = static_cast<double>(f.size()) - n1;
  const auto [a, b] = FitPlatt(f, std::span<const bool>(pos.get(), f.size()));
  CHECK(a > 0.0);
  auto nll = [&](double A, double B) {
    double v = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double t = pos[i] ? (n1 + 1) / (n1 + 2) : 1 / (n0 + 2);
      const double p = 1.0 / (1.0 + std::exp(-(A * f[i] + B)));
      v -= t * std::log(p) + (1 - t) * std::log(1 - p);
    }
    return v;
  };
  const double best = nll(a, b);
  for (double da : {-1e-3, 0.0, 1e-3}) {
    for (double db : {-1e-3, 0.0, 1e-3}) CHECK(nll(a + da, b + db) >= best - 1e-9);
  }
}

TEST_CASE("mlp") {
  MlpShape shape;
  shape.vocab_size = kFirstTermId + kGenreCount;
  shape.embedding_dim = 8;
  shape.hidden = {16};
  SUBCASE("all-zero model is uniform") {
    const Probabilities p = MlpModel(shape).PredictProba({kClsId, 5, kSepId});
    for (double v : p) CHECK(v == 1.0 / kGenreCount);
  }
  SUBCASE("memorizes nine sequences") {
    SequenceDataset d;
    d.vocab_size = shape.vocab_size;
    for (Genre g : kAllGenres) {
      d.inputs.push_back({kClsId, static_cast<TermId>(kFirstTermId + GenreIndex(g)), kSepId, kPadId});
      d.labels.push_back(g);
    }
    TrainLog log;
    const MlpModel m = TrainMlp(d, Plain(0.1, 300, 1), shape, &log);
    CHECK(log.epochs.back().train_accuracy == 1.0);
    CHECK(TrainMlp(d, Plain(0.1, 300, 1), shape) == m);
  }
}

TEST_CASE("random forest") {
  SUBCASE("stump on one perfectly splitting feature") {
    VectorDataset d;
    d.dim = 1;
    for (int i = 0; i < 8; ++i) {
      CountVector v;
      if (i % 2) v.entries = {{0, 1.0}};
      d.inputs.push_back(v);
      d.labels.push_back(i % 2 ? Genre::kSides : Genre::kMeal);
    }
    ForestConfig cfg;
    cfg.trees = 1;
    cfg.max_depth = 1;
    cfg.bootstrap = false;
    const ForestModel f = ForestModel::Train(d, cfg);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(PredictGenre(f.PredictProba(d.inputs[i])) == d.labels[i]);
  }
  SUBCASE("one full tree memorizes distinct points") {
    std::mt19937_64 rng(9);
    VectorDataset d;
    d.dim = 6;
    std::set<std::vector<int>> seen;
    while (d.size() < 40) {
      std::vector<int> toks;
      for (int k = 0; k < 4; ++k) toks.push_back(static_cast<int>(rng() % 6));
      std::sort(toks.begin(), toks.end());
      if (!seen.insert(toks).second) continue;
      d.inputs.push_back(Counts(toks));
      d.labels.push_back(GenreFromIndex(static_cast<int>(rng() % kGenreCount)));
    }
    ForestConfig cfg;
    cfg.trees = 1;
    cfg.max_depth = 64;
    cfg.bootstrap = false;
    cfg.max_features = d.dim;
    const ForestModel f = ForestModel::Train(d, cfg);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(PredictGenre(f.PredictProba(d.inputs[i])) == d.labels[i]);
    ForestConfig many;
    many.trees = 5;
    many.seed = 4;
    CHECK(ForestModel::Train(d, many) == ForestModel::Train(d, many));
  }
}

TEST_CASE("predict genre") {
  std::array<double, kGenreCount> v{};
  v[2] = 1.0;
  CHECK(PredictGenre(v) == Genre::kNonVeg);
  v.fill(1.0 / 9.0);
  CHECK(PredictGenre(v) == Genre::kBakery);
  const std::array<double, kGenreCount> w = {0.1, 0.3, 0.3, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
  CHECK(PredictGenre(w) == Genre::kDrinks);
  v[4] = NAN;
  CHECK_THROWS_AS(PredictGenre(v), Error);
}

TEST_CASE("warmup schedule") {
  const WarmupLinearSchedule s(1.0, 10, 0.2);
  CHECK(s.warmup_steps() == 2);
  CHECK(s.Rate(1) == doctest::Approx(0.5));
  CHECK(s.Rate(2) == doctest::Approx(1.0));
  CHECK(s.Rate(10) == doctest::Approx(0.0));
}

TEST_CASE("model files round trip") {
  const VectorDataset d = OneHotGenres(2);
  std::vector<AnyModel> models = {NaiveBayesModel::Train(d, 0.5), TrainLogReg(d, Plain(0.5, 5)),
                                  TrainSvm(d, Plain(0.5, 5))};
  ForestConfig fc;
  fc.trees = 3;
  models.push_back(ForestModel::Train(d, fc));
  MlpShape shape;
  shape.vocab_size = 12;
  shape.embedding_dim = 3;
  shape.hidden = {4, 3};
  models.push_back(MlpModel::Initialize(shape, 8));
  for (const AnyModel& m : models) {
    std::stringstream io;
    WriteModel(m, io);
    const std::string bytes = io.str();
    CHECK(bytes.substr(0, 8) == std::string("RFMODEL\0", 8));
    const AnyModel back = ReadModel(io);
    CHECK(back == m);
    std::stringstream again;
    WriteModel(back, again);
    CHECK(again.str() == bytes);
    CHECK_FALSE(ModelSummary(m).empty());
  }
  const LinearModel& svm = std::get<LinearModel>(models[2]);
  CHECK(svm.platt_a() != std::array<double, kGenreCount>{1, 1, 1, 1, 1, 1, 1, 1, 1});
  std::stringstream bad("NOTAMODEL");
  CHECK_THROWS_AS(ReadModel(bad), Error);
}

TEST_CASE("prediction through text") {
  const Vocabulary v({"bread", "juice"});
  VectorDataset d;
  d.dim = v.size();
  d.inputs = {Vectorize("bread", v), Vectorize("juice", v)};
  d.labels = {Genre::kBakery, Genre::kDrinks};
  const AnyModel nb = NaiveBayesModel::Train(d, 1.0);
  CHECK(PredictGenre(PredictText(nb, "fresh juice", v, 16)) == Genre::kDrinks);
  CHECK(PredictVector(nb, d.inputs[0]) == PredictText(nb, "bread", v, 16));
}
