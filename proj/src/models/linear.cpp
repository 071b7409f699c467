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

#include "recipeforge/models/linear.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "recipeforge/error.hpp"

namespace recipeforge {
namespace {

using Objective = double (*)(const LinearModel&, const CountVector&, Genre,
                             const std::array<double, kGenreCount>&,
                             std::array<double, kGenreCount>&);

// Cross-entropy of one example; fills d(loss)/d(score).
double SoftmaxTerm(const LinearModel&, const CountVector&, Genre gold,
                   const std::array<double, kGenreCount>& scores,
                   std::array<double, kGenreCount>& dscore) {
  const Probabilities p = Softmax(scores);
  const int y = GenreIndex(gold);
  for (int g = 0; g < kGenreCount; ++g) dscore[g] = p[g] - (g == y ? 1.0 : 0.0);
  // log-sum-exp form avoids log(0) when p[y] underflows.
  double m = scores[0];
  for (double s : scores) m = std::max(m, s);
  double z = 0.0;
  for (double s : scores) z += std::exp(s - m);
  return m + std::log(z) - scores[y];
}

double HingeTerm(const LinearModel&, const CountVector&, Genre gold,
                 const std::array<double, kGenreCount>& scores,
                 std::array<double, kGenreCount>& dscore) {
  const int y = GenreIndex(gold);
  double loss = 0.0;
  for (int g = 0; g < kGenreCount; ++g) {
    const double target = g == y ? 1.0 : -1.0;
    const double slack = 1.0 - target * scores[g];
    if (slack > 0.0) {
      loss += slack;
      dscore[g] = -target;
    } else {
      dscore[g] = 0.0;
    }
  }
  return loss;
}

// Accumulates the mean loss and gradient over `positions` (or all examples
// when positions is empty) in a fixed sequential order.
LinearGradient Accumulate(const LinearModel& model, std::span<const CountVector> inputs,
                          std::span<const Genre> labels, const std::vector<std::size_t>* positions,
                          Objective objective) {
  LinearGradient grad;
  grad.weights.assign(model.weights().size(), 0.0);
  const std::size_t n = positions ? positions->size() : inputs.size();
  if (n == 0) return grad;
  const double scale = 1.0 / static_cast<double>(n);
  const std::size_t dim = model.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = positions ? (*positions)[k] : k;
    const CountVector& x = inputs[i];
    const auto scores = model.Scores(x);
    std::array<double, kGenreCount> dscore{};
    grad.loss += objective(model, x, labels[i], scores, dscore) * scale;
    for (int g = 0; g < kGenreCount; ++g) {
      if (dscore[g] == 0.0) continue;
      const double d = dscore[g] * scale;
      grad.bias[g] += d;
      double* row = grad.weights.data() + g * dim;
      for (const auto& [id, c] : x.entries) row[id] += d * c;
    }
  }
  return grad;
}

LinearModel Train(LinearKind kind, const VectorDataset& data, const TrainConfig& cfg,
                  TrainLog* log, Objective objective) {
  data.Validate();
  cfg.Validate();
  LinearModel model(kind, data.dim);
  const std::size_t steps_per_epoch = (data.size() + cfg.batch_size - 1) / cfg.batch_size;
  const WarmupLinearSchedule schedule(cfg.learning_rate, steps_per_epoch * cfg.epochs,
                                      cfg.warmup_fraction);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    for (const auto& batch : EpochBatches(data.size(), cfg.batch_size, cfg.seed, epoch)) {
      const double rate = schedule.Rate(++step);
      const LinearGradient grad = Accumulate(model, data.inputs, data.labels, &batch, objective);
      if (!std::isfinite(grad.loss)) {
        Fail(ErrorKind::kNumeric, "training loss became non-finite at step " +
                                      std::to_string(step) + "; try a lower learning rate");
      }
      loss_sum += grad.loss * static_cast<double>(batch.size());
      const double shrink = 1.0 - rate * cfg.weight_decay;
      auto& w = model.weights();
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = shrink * w[k] - rate * grad.weights[k];
      for (int g = 0; g < kGenreCount; ++g) model.bias()[g] -= rate * grad.bias[g];
      if (log) log->step_rates.push_back(rate);
    }
    if (log) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto s = model.Scores(data.inputs[i]);
        correct += PredictGenre(s) == data.labels[i];
      }
      log->epochs.push_back({epoch + 1, loss_sum / static_cast<double>(data.size()),
                             static_cast<double>(correct) / static_cast<double>(data.size())});
    }
  }
  return model;
}

}  // namespace

LinearModel::LinearModel(LinearKind kind, std::size_t dim)
    : kind_(kind), dim_(dim), weights_(kGenreCount * dim, 0.0) {}

std::array<double, kGenreCount> LinearModel::Scores(const CountVector& x) const {
  std::array<double, kGenreCount> s = bias_;
  for (const auto& [id, c] : x.entries) {
    if (id < 0 || static_cast<std::size_t>(id) >= dim_) {
      Fail(ErrorKind::kValidation, "feature index " + std::to_string(id) +
                                       " outside model vocabulary of size " +
                                       std::to_string(dim_));
    }
  }
  for (int g = 0; g < kGenreCount; ++g) {
    const double* row = weights_.data() + g * dim_;
    for (const auto& [id, c] : x.entries) s[g] += row[id] * c;
  }
  return s;
}

Probabilities LinearModel::PredictProba(const CountVector& x) const {
  const auto s = Scores(x);
  if (kind_ == LinearKind::kSoftmaxRegression) return Softmax(s);
  Probabilities p{};
  double z = 0.0;
  for (int g = 0; g < kGenreCount; ++g) {
    const double t = platt_a_[g] * s[g] + platt_b_[g];
    if (!std::isfinite(t)) Fail(ErrorKind::kNumeric, "non-finite SVM margin");
    p[g] = t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
    z += p[g];
  }
  if (z <= 0.0) {
    p.fill(1.0 / kGenreCount);
    return p;
  }
  for (double& v : p) v /= z;
  return p;
}

LinearGradient SoftmaxLossGradient(const LinearModel& model, std::span<const CountVector> inputs,
                                   std::span<const Genre> labels) {
  return Accumulate(model, inputs, labels, nullptr, &SoftmaxTerm);
}

LinearGradient HingeLossGradient(const LinearModel& model, std::span<const CountVector> inputs,
                                 std::span<const Genre> labels) {
  return Accumulate(model, inputs, labels, nullptr, &HingeTerm);
}

LinearModel TrainLogReg(const VectorDataset& data, const TrainConfig& cfg, TrainLog* log) {
  return Train(LinearKind::kSoftmaxRegression, data, cfg, log, &SoftmaxTerm);
}

LinearModel TrainSvm(const VectorDataset& data, const TrainConfig& cfg, TrainLog* log) {
  LinearModel m = Train(LinearKind::kOvrHinge, data, cfg, log, &HingeTerm);
  CalibrateSvm(m, data);
  return m;
}

std::pair<double, double> FitPlatt(std::span<const double> f, std::span<const bool> positive) {
  // Written for Platt's convention P = 1 / (1 + exp(A f + B)); sign flipped
  // on return.
  double prior1 = 0.0;
  for (bool b : positive) prior1 += b;
  const double prior0 = static_cast<double>(positive.size()) - prior1;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) t[i] = positive[i] ? hi : lo;

  auto objective = [&](double a, double b) {
    double v = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double z = f[i] * a + b;
      v += z >= 0.0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return v;
  };
  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = objective(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = 1e-12, h22 = 1e-12, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double z = f[i] * a + b;
      double p, q;
      if (z >= 0.0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += f[i] * f[i] * d2;
      h22 += d2;
      h21 += f[i] * d2;
      const double d1 = t[i] - p;
      g1 += f[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= 1e-10) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step *= 0.5;
    }
    if (step < 1e-10) break;
  }
  return {-a, -b};
}

void CalibrateSvm(LinearModel& model, const VectorDataset& data) {
  data.Validate();
  std::vector<std::array<double, kGenreCount>> scores;
  scores.reserve(data.size());
  for (const CountVector& x : data.inputs) scores.push_back(model.Scores(x));
  std::vector<double> margins(data.size());
  std::unique_ptr<bool[]> positive(new bool[data.size()]);
  for (int g = 0; g < kGenreCount; ++g) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      margins[i] = scores[i][g];
      positive[i] = GenreIndex(data.labels[i]) == g;
    }
    const auto [a, b] = FitPlatt(margins, std::span<const bool>(positive.get(), data.size()));
    model.platt_a()[g] = a;
    model.platt_b()[g] = b;
  }
}

}  // namespace recipeforge
