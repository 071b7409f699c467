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

#include "recipeforge/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "recipeforge/error.hpp"
#include "recipeforge/random.hpp"

namespace recipeforge {
namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

template <typename T, typename F>
T ParseNumber(const std::string& key, const std::string& text, F convert) {
  try {
    std::size_t used = 0;
    T v = convert(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    Fail(ErrorKind::kValidation, "config key '" + key + "': cannot parse '" + text + "'");
  }
}

}  // namespace

void RunConfig::Merge(const RunConfig& over) {
  for (const auto& [k, v] : over.values_) values_[k] = v;
}

std::string RunConfig::String(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::Double(const std::string& key, double fallback) const {
  if (!Has(key)) return fallback;
  return ParseNumber<double>(key, values_.at(key),
                             [](const std::string& s, std::size_t* n) { return std::stod(s, n); });
}

std::size_t RunConfig::Size(const std::string& key, std::size_t fallback) const {
  if (!Has(key)) return fallback;
  const std::string& text = values_.at(key);
  if (!text.empty() && text[0] == '-') {
    Fail(ErrorKind::kValidation, "config key '" + key + "' must be non-negative");
  }
  return ParseNumber<std::size_t>(
      key, text, [](const std::string& s, std::size_t* n) { return std::stoull(s, n); });
}

std::uint64_t RunConfig::U64(const std::string& key, std::uint64_t fallback) const {
  return Size(key, fallback);
}

RunConfig RunConfig::Parse(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorKind::kParse, "config line " + std::to_string(number) + ": expected key = value");
    }
    std::string key = Trim(line.substr(0, eq));
    if (key.empty()) Fail(ErrorKind::kParse, "config line " + std::to_string(number) + ": empty key");
    cfg.Set(key, Trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open config " + path.string());
  return Parse(in);
}

std::string RunConfig::Serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::string RunConfig::RunId() const { return HexDigest(Fnv1a(Serialize())); }

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HexDigest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string FileDigest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    h = Fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  }
  return HexDigest(h);
}

TrainRequest TrainRequestFromConfig(const RunConfig& cfg) {
  TrainRequest req;
  const std::string model = cfg.String("model", "logreg");
  const auto kind = ModelKindFromName(model);
  if (!kind) Fail(ErrorKind::kValidation, "unknown model '" + model + "' (nb, logreg, svm, mlp, forest)");
  req.kind = *kind;
  const std::string feature = cfg.String("feature", "title");
  const auto feature_set = FeatureSetFromName(feature);
  if (!feature_set) {
    Fail(ErrorKind::kValidation,
         "unknown feature '" + feature + "' (title, title-ner, title-ext-ner, directions)");
  }
  req.feature = *feature_set;
  req.train = req.kind == ModelKind::kMlp ? MlpTrainDefaults() : LinearTrainDefaults();
  req.train.learning_rate = cfg.Double("lr", req.train.learning_rate);
  req.train.batch_size = cfg.Size("batch", req.train.batch_size);
  req.train.epochs = cfg.Size("epochs", req.train.epochs);
  req.train.warmup_fraction = cfg.Double("warmup", req.train.warmup_fraction);
  req.train.weight_decay = cfg.Double("weight_decay", req.train.weight_decay);
  req.train.seed = cfg.U64("seed", req.train.seed);
  req.train.Validate();
  req.nb_alpha = cfg.Double("alpha", req.nb_alpha);
  req.forest.trees = cfg.Size("trees", req.forest.trees);
  req.forest.max_depth = cfg.Size("max_depth", req.forest.max_depth);
  req.forest.max_features = cfg.Size("max_features", req.forest.max_features);
  req.forest.seed = req.train.seed;
  req.embedding_dim = cfg.Size("embedding_dim", req.embedding_dim);
  if (cfg.Has("hidden")) {
    req.hidden.clear();
    std::stringstream ss(cfg.String("hidden"));
    std::string part;
    while (std::getline(ss, part, ',')) {
      RunConfig one;
      one.Set("hidden", Trim(part));
      if (!Trim(part).empty()) req.hidden.push_back(one.Size("hidden", 0));
    }
  }
  req.max_len = cfg.Size("max_len", req.max_len);
  req.vocabulary.max_size = cfg.Size("vocab_max_size", req.vocabulary.max_size);
  req.vocabulary.min_df = cfg.Size("min_df", req.vocabulary.min_df);
  return req;
}

TrainedModel TrainOnRecords(const Corpus& train, const TrainRequest& req) {
  if (train.empty()) Fail(ErrorKind::kValidation, "no training records");
  std::vector<std::string> texts;
  std::vector<Genre> labels;
  for (const RecipeRecord& r : train) {
    if (!r.genre) Fail(ErrorKind::kValidation, "training record " + std::to_string(r.id) + " is unlabeled");
    texts.push_back(ComposeFeatureText(r, req.feature));
    labels.push_back(*r.genre);
  }
  TrainedModel out{AnyModel{}, BuildVocabulary(texts, req.vocabulary), {}};
  if (req.kind == ModelKind::kMlp) {
    SequenceDataset data;
    data.vocab_size = out.vocab.size();
    data.labels = labels;
    for (const std::string& t : texts) {
      data.inputs.push_back(EncodeSequence(t, out.vocab, req.SequenceLength()));
    }
    MlpShape shape;
    shape.vocab_size = out.vocab.size();
    shape.embedding_dim = req.embedding_dim;
    shape.hidden = req.hidden;
    out.model = TrainMlp(data, req.train, shape, &out.log);
    return out;
  }
  VectorDataset data;
  data.dim = out.vocab.size();
  data.labels = labels;
  for (const std::string& t : texts) data.inputs.push_back(Vectorize(t, out.vocab));
  switch (req.kind) {
    case ModelKind::kNaiveBayes:
      out.model = NaiveBayesModel::Train(data, req.nb_alpha);
      break;
    case ModelKind::kLogReg:
      out.model = TrainLogReg(data, req.train, &out.log);
      break;
    case ModelKind::kSvm:
      out.model = TrainSvm(data, req.train, &out.log);
      break;
    case ModelKind::kForest: {
      ForestConfig fc = req.forest;
      fc.seed = req.train.seed;
      out.model = ForestModel::Train(data, fc);
      break;
    }
    case ModelKind::kMlp:
      break;
  }
  return out;
}

ExperimentResult RunExperiment(const Corpus& input, const ExperimentConfig& cfg) {
  if (cfg.features.empty() || cfg.models.empty()) {
    Fail(ErrorKind::kValidation, "experiment needs at least one feature and one model");
  }
  Corpus records = cfg.equalize_per_genre ? Equalize(input, *cfg.equalize_per_genre, cfg.seed) : input;
  // Fail before any training if a requested feature cannot be composed.
  for (const RecipeRecord& r : records) {
    for (FeatureSet f : cfg.features) ComposeFeatureText(r, f);
  }

  std::vector<Corpus> blocks;
  if (cfg.block_size == 0 || cfg.block_size >= records.size()) {
    blocks.push_back(records);
  } else {
    std::vector<std::size_t> order(records.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    Rng rng(DeriveSeed(cfg.seed, streams::kBlock));
    rng.Shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.block_size) {
      // A short tail is folded into the previous block.
      if (!blocks.empty() && order.size() - start < cfg.block_size) {
        for (std::size_t k = start; k < order.size(); ++k) blocks.back().push_back(records[order[k]]);
        break;
      }
      Corpus block;
      for (std::size_t k = start; k < std::min(order.size(), start + cfg.block_size); ++k) {
        block.push_back(records[order[k]]);
      }
      blocks.push_back(std::move(block));
    }
    for (Corpus& b : blocks) {
      std::sort(b.begin(), b.end(),
                [](const RecipeRecord& x, const RecipeRecord& y) { return x.id < y.id; });
    }
  }

  ExperimentResult result;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Corpus& block = blocks[bi];
    const DatasetSplit split = SplitStratified(block, cfg.ratios, cfg.seed);
    const Corpus train = SelectById(block, split.train_ids);
    const Corpus val = SelectById(block, split.val_ids);
    const Corpus test = SelectById(block, split.test_ids);
    for (FeatureSet f : cfg.features) {
      for (ModelKind m : cfg.models) {
        TrainRequest req = cfg.base;
        req.kind = m;
        req.feature = f;
        if (m == ModelKind::kMlp && cfg.base.kind != ModelKind::kMlp) {
          const TrainConfig lin = cfg.base.train;
          req.train = MlpTrainDefaults();
          req.train.seed = lin.seed;
        }
        const TrainedModel tm = TrainOnRecords(train, req);
        const std::size_t len = req.SequenceLength();
        ExperimentRow row;
        row.block = bi;
        row.feature = std::string(FeatureSetName(f));
        row.model = std::string(ModelKindName(m));
        row.train_n = train.size();
        row.val_n = val.size();
        row.test_n = test.size();
        row.train_accuracy = Evaluate(tm.model, tm.vocab, train, f, "train", len).report.accuracy;
        row.val_accuracy = Evaluate(tm.model, tm.vocab, val, f, "val", len).report.accuracy;
        Evaluation te = Evaluate(tm.model, tm.vocab, test, f, "test", len);
        row.test_accuracy = te.report.accuracy;
        row.test_macro_f1 = te.report.prf.macro_f1;
        row.test_macro_auc = te.report.macro_auc;
        result.rows.push_back(row);
        result.test_evaluations.push_back(std::move(te));
      }
    }
  }
  return result;
}

std::string ExperimentCsv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "block,feature,model,train_n,val_n,test_n,train_accuracy,val_accuracy,test_accuracy,"
         "test_macro_f1,test_macro_auc\n";
  char buf[256];
  for (const ExperimentRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%s,%zu,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.block,
                  r.feature.c_str(), r.model.c_str(), r.train_n, r.val_n, r.test_n,
                  r.train_accuracy, r.val_accuracy, r.test_accuracy, r.test_macro_f1,
                  r.test_macro_auc);
    out << buf;
  }
  return out.str();
}

std::string ExperimentTable(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-5s %-14s %-7s %9s %9s %9s %9s %9s\n", "block", "feature",
                "model", "train", "val", "test", "macro-f1", "macro-auc");
  out << buf;
  for (const ExperimentRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%-5zu %-14s %-7s %8.2f%% %8.2f%% %8.2f%% %9.4f %9.4f\n", r.block,
                  r.feature.c_str(), r.model.c_str(), 100.0 * r.train_accuracy,
                  100.0 * r.val_accuracy, 100.0 * r.test_accuracy, r.test_macro_f1,
                  r.test_macro_auc);
    out << buf;
  }
  return out.str();
}

}  // namespace recipeforge
