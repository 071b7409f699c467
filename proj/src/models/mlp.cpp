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

#include "recipeforge/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "recipeforge/error.hpp"
#include "recipeforge/random.hpp"

namespace recipeforge {
namespace {

// Activations of one forward pass, kept for backpropagation.
struct Trace {
  std::vector<double> pooled;                  // mean embedding
  std::vector<std::vector<double>> pre;        // pre-activations per layer
  std::vector<std::vector<double>> post;       // post-activations (hidden)
  std::array<double, kGenreCount> logits{};
  std::size_t tokens = 0;                      // non-[PAD] count
};

Trace Forward(const MlpModel& m, const TokenSequence& seq) {
  const MlpShape& shape = m.shape();
  const auto& p = m.parameters();
  Trace t;
  t.pooled.assign(shape.embedding_dim, 0.0);
  for (TermId id : seq) {
    if (id == kPadId) continue;
    if (id < 0 || static_cast<std::size_t>(id) >= shape.vocab_size) {
      Fail(ErrorKind::kValidation, "token id " + std::to_string(id) + " outside model vocabulary");
    }
    const double* e = p.data() + static_cast<std::size_t>(id) * shape.embedding_dim;
    for (std::size_t d = 0; d < shape.embedding_dim; ++d) t.pooled[d] += e[d];
    ++t.tokens;
  }
  if (t.tokens > 0) {
    for (double& v : t.pooled) v /= static_cast<double>(t.tokens);
  }
  const std::vector<double>* input = &t.pooled;
  for (std::size_t layer = 0; layer < m.layer_count(); ++layer) {
    const std::size_t in = m.layer_inputs(layer);
    const std::size_t out = m.layer_outputs(layer);
    const double* w = p.data() + m.layer_weight_offset(layer);
    const double* b = p.data() + m.layer_bias_offset(layer);
    std::vector<double> z(out);
    for (std::size_t o = 0; o < out; ++o) {
      double s = b[o];
      for (std::size_t i = 0; i < in; ++i) s += w[o * in + i] * (*input)[i];
      z[o] = s;
    }
    t.pre.push_back(z);
    if (layer + 1 == m.layer_count()) {
      for (int g = 0; g < kGenreCount; ++g) t.logits[g] = z[g];
    } else {
      for (double& v : z) v = v > 0.0 ? v : 0.0;
      t.post.push_back(std::move(z));
      input = &t.post.back();
    }
  }
  return t;
}

double CrossEntropy(const std::array<double, kGenreCount>& logits, int gold) {
  double m = logits[0];
  for (double s : logits) m = std::max(m, s);
  double z = 0.0;
  for (double s : logits) z += std::exp(s - m);
  return m + std::log(z) - logits[gold];
}

// Adds scale * d(loss)/d(params) for one example into grad.
double Backward(const MlpModel& m, const TokenSequence& seq, Genre gold, double scale,
                std::vector<double>& grad) {
  const Trace t = Forward(m, seq);
  const auto& p = m.parameters();
  const int y = GenreIndex(gold);
  const Probabilities prob = Softmax(t.logits);
  std::vector<double> delta(kGenreCount);
  for (int g = 0; g < kGenreCount; ++g) delta[g] = (prob[g] - (g == y ? 1.0 : 0.0)) * scale;

  for (std::size_t layer = m.layer_count(); layer-- > 0;) {
    const std::size_t in = m.layer_inputs(layer);
    const std::size_t out = m.layer_outputs(layer);
    const std::vector<double>& input = layer == 0 ? t.pooled : t.post[layer - 1];
    const double* w = p.data() + m.layer_weight_offset(layer);
    double* gw = grad.data() + m.layer_weight_offset(layer);
    double* gb = grad.data() + m.layer_bias_offset(layer);
    std::vector<double> below(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      if (delta[o] == 0.0) continue;
      gb[o] += delta[o];
      for (std::size_t i = 0; i < in; ++i) {
        gw[o * in + i] += delta[o] * input[i];
        below[i] += w[o * in + i] * delta[o];
      }
    }
    if (layer > 0) {
      const std::vector<double>& z = t.pre[layer - 1];
      for (std::size_t i = 0; i < in; ++i) below[i] = z[i] > 0.0 ? below[i] : 0.0;
    }
    delta = std::move(below);
  }
  if (t.tokens > 0) {
    const std::size_t dim = m.shape().embedding_dim;
    const double share = 1.0 / static_cast<double>(t.tokens);
    for (TermId id : seq) {
      if (id == kPadId) continue;
      double* ge = grad.data() + static_cast<std::size_t>(id) * dim;
      for (std::size_t d = 0; d < dim; ++d) ge[d] += delta[d] * share;
    }
  }
  return CrossEntropy(t.logits, y) * scale;
}

}  // namespace

MlpModel::MlpModel(MlpShape shape) : shape_(std::move(shape)) {
  if (shape_.embedding_dim == 0) Fail(ErrorKind::kValidation, "embedding dimension must be positive");
  std::size_t offset = shape_.vocab_size * shape_.embedding_dim;
  std::size_t in = shape_.embedding_dim;
  for (std::size_t layer = 0; layer <= shape_.hidden.size(); ++layer) {
    const std::size_t out =
        layer < shape_.hidden.size() ? shape_.hidden[layer] : static_cast<std::size_t>(kGenreCount);
    if (out == 0) Fail(ErrorKind::kValidation, "hidden layer sizes must be positive");
    weight_offsets_.push_back(offset);
    offset += out * in;
    bias_offsets_.push_back(offset);
    offset += out;
    in = out;
  }
  params_.assign(offset, 0.0);
}

MlpModel MlpModel::Initialize(MlpShape shape, std::uint64_t seed) {
  MlpModel m(std::move(shape));
  Rng rng(DeriveSeed(seed, streams::kInit));
  const std::size_t emb = m.shape_.vocab_size * m.shape_.embedding_dim;
  const double emb_scale = 1.0 / std::sqrt(static_cast<double>(m.shape_.embedding_dim));
  for (std::size_t k = 0; k < emb; ++k) m.params_[k] = rng.Normal() * emb_scale;
  for (std::size_t layer = 0; layer + 1 < m.layer_count(); ++layer) {
    const std::size_t in = m.layer_inputs(layer);
    const double scale = std::sqrt(2.0 / static_cast<double>(in));
    const std::size_t lo = m.layer_weight_offset(layer);
    for (std::size_t k = 0; k < m.layer_outputs(layer) * in; ++k) {
      m.params_[lo + k] = rng.Normal() * scale;
    }
  }
  return m;
}

std::size_t MlpModel::layer_weight_offset(std::size_t layer) const { return weight_offsets_.at(layer); }
std::size_t MlpModel::layer_bias_offset(std::size_t layer) const { return bias_offsets_.at(layer); }

std::size_t MlpModel::layer_inputs(std::size_t layer) const {
  return layer == 0 ? shape_.embedding_dim : shape_.hidden.at(layer - 1);
}

std::size_t MlpModel::layer_outputs(std::size_t layer) const {
  return layer < shape_.hidden.size() ? shape_.hidden[layer] : static_cast<std::size_t>(kGenreCount);
}

std::array<double, kGenreCount> MlpModel::Logits(const TokenSequence& seq) const {
  return Forward(*this, seq).logits;
}

Probabilities MlpModel::PredictProba(const TokenSequence& seq) const {
  const Trace t = Forward(*this, seq);
  if (t.tokens == 0) {
    std::clog << "warning: all-[PAD] sequence; predicting the uniform distribution\n";
    Probabilities uniform;
    uniform.fill(1.0 / kGenreCount);
    return uniform;
  }
  return Softmax(t.logits);
}

MlpGradient MlpLossGradient(const MlpModel& model, std::span<const TokenSequence> inputs,
                            std::span<const Genre> labels) {
  MlpGradient out;
  out.gradient.assign(model.parameters().size(), 0.0);
  if (inputs.empty()) return out;
  const double scale = 1.0 / static_cast<double>(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.loss += Backward(model, inputs[i], labels[i], scale, out.gradient);
  }
  return out;
}

MlpModel TrainMlp(const SequenceDataset& data, const TrainConfig& cfg, const MlpShape& shape,
                  TrainLog* log) {
  data.Validate();
  cfg.Validate();
  if (shape.vocab_size != data.vocab_size) {
    Fail(ErrorKind::kValidation, "model vocabulary size differs from the data's");
  }
  MlpModel model = MlpModel::Initialize(shape, cfg.seed);
  const std::size_t steps_per_epoch = (data.size() + cfg.batch_size - 1) / cfg.batch_size;
  const WarmupLinearSchedule schedule(cfg.learning_rate, steps_per_epoch * cfg.epochs,
                                      cfg.warmup_fraction);
  std::vector<double> grad(model.parameters().size());
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    for (const auto& batch : EpochBatches(data.size(), cfg.batch_size, cfg.seed, epoch)) {
      const double rate = schedule.Rate(++step);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double scale = 1.0 / static_cast<double>(batch.size());
      double loss = 0.0;
      for (std::size_t i : batch) loss += Backward(model, data.inputs[i], data.labels[i], scale, grad);
      if (!std::isfinite(loss)) {
        Fail(ErrorKind::kNumeric, "training loss became non-finite at step " +
                                      std::to_string(step) + "; try a lower learning rate");
      }
      loss_sum += loss * static_cast<double>(batch.size());
      const double shrink = 1.0 - rate * cfg.weight_decay;
      auto& p = model.parameters();
      for (std::size_t k = 0; k < p.size(); ++k) p[k] = shrink * p[k] - rate * grad[k];
      if (log) log->step_rates.push_back(rate);
    }
    if (log) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        correct += PredictGenre(model.Logits(data.inputs[i])) == data.labels[i];
      }
      log->epochs.push_back({epoch + 1, loss_sum / static_cast<double>(data.size()),
                             static_cast<double>(correct) / static_cast<double>(data.size())});
    }
  }
  return model;
}

}  // namespace recipeforge
