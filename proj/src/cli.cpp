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

#include "recipeforge/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "recipeforge/active_learning.hpp"
#include "recipeforge/corpus.hpp"
#include "recipeforge/entities.hpp"
#include "recipeforge/error.hpp"
#include "recipeforge/evaluation.hpp"
#include "recipeforge/pipeline.hpp"
#include "recipeforge/service.hpp"
#include "recipeforge/synthetic.hpp"

namespace recipeforge {
namespace {

namespace fs = std::filesystem;

// Keys that name files; they do not change what a run computes, so they are
// left out of run ids.
const char* const kPathKeys[] = {"in", "out", "config", "run", "checkpoint", "data_dir"};

fs::path DataDir() {
  const char* env = std::getenv("RECIPEFORGE_DATA_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

std::string ContentId(const RunConfig& cfg) {
  RunConfig c;
  for (const auto& [k, v] : cfg.values()) {
    if (std::find(std::begin(kPathKeys), std::end(kPathKeys), k) == std::end(kPathKeys)) c.Set(k, v);
  }
  return c.RunId();
}

std::string Required(const RunConfig& cfg, const std::string& key) {
  if (!cfg.Has(key) || cfg.String(key).empty()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    Fail(ErrorKind::kValidation, "missing required --" + flag);
  }
  return cfg.String(key);
}

// Shortest of %.15g / %.17g that reads back exactly.
std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void MakeParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void WriteText(const fs::path& path, const std::string& text) {
  MakeParent(path);
  std::ofstream f(path, std::ios::binary);
  if (!f) Fail(ErrorKind::kIo, "cannot write " + path.string());
  f << text;
}

void WriteCorpus(const Corpus& records, const fs::path& path) {
  MakeParent(path);
  WriteRecords(records, path);
}

void EchoConfig(const RunConfig& cfg, std::ostream& err) {
  err << "resolved config:\n";
  std::istringstream lines(cfg.Serialize());
  for (std::string line; std::getline(lines, line);) err << "  " << line << "\n";
  err << "seed=" << cfg.String("seed", "0") << "\n";
}

// All effective training settings, so the echoed/serialized config is
// complete without knowing the defaults.
void StoreTrainRequest(const TrainRequest& req, RunConfig& cfg) {
  cfg.Set("model", std::string(ModelKindName(req.kind)));
  cfg.Set("feature", std::string(FeatureSetName(req.feature)));
  cfg.Set("lr", Num(req.train.learning_rate));
  cfg.Set("batch", std::to_string(req.train.batch_size));
  cfg.Set("epochs", std::to_string(req.train.epochs));
  cfg.Set("warmup", Num(req.train.warmup_fraction));
  cfg.Set("weight_decay", Num(req.train.weight_decay));
  cfg.Set("seed", std::to_string(req.train.seed));
  cfg.Set("vocab_max_size", std::to_string(req.vocabulary.max_size));
  cfg.Set("min_df", std::to_string(req.vocabulary.min_df));
  switch (req.kind) {
    case ModelKind::kNaiveBayes: cfg.Set("alpha", Num(req.nb_alpha)); break;
    case ModelKind::kForest:
      cfg.Set("trees", std::to_string(req.forest.trees));
      cfg.Set("max_depth", std::to_string(req.forest.max_depth));
      cfg.Set("max_features", std::to_string(req.forest.max_features));
      break;
    case ModelKind::kMlp: {
      cfg.Set("embedding_dim", std::to_string(req.embedding_dim));
      std::string hidden;
      for (std::size_t h : req.hidden) hidden += (hidden.empty() ? "" : ",") + std::to_string(h);
      cfg.Set("hidden", hidden);
      cfg.Set("max_len", std::to_string(req.SequenceLength()));
      break;
    }
    default: break;
  }
}

SplitRatios RatiosFromConfig(RunConfig& cfg) {
  SplitRatios r;
  r.train = cfg.Double("split_train", r.train);
  r.val = cfg.Double("split_val", r.val);
  r.test = cfg.Double("split_test", r.test);
  cfg.Set("split_train", Num(r.train));
  cfg.Set("split_val", Num(r.val));
  cfg.Set("split_test", Num(r.test));
  return r;
}

Corpus Labeled(const Corpus& records) {
  Corpus out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const RecipeRecord& r) { return r.labeled(); });
  return out;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) {
    p.erase(0, p.find_first_not_of(" \t"));
    p.erase(p.find_last_not_of(" \t") + 1);
    if (!p.empty()) parts.push_back(p);
  }
  return parts;
}

std::string StatsTable(const Corpus& records) {
  const CorpusStats st = ComputeCorpusStats(records);
  std::ostringstream os;
  os << std::left << std::setw(12) << "genre" << std::right << std::setw(8) << "human"
     << std::setw(9) << "machine" << std::setw(8) << "total" << "\n";
  for (Genre g : kAllGenres) {
    const GenreCounts& c = st.of(g);
    os << std::left << std::setw(12) << GenreName(g) << std::right << std::setw(8) << c.human
       << std::setw(9) << c.machine << std::setw(8) << c.total() << "\n";
  }
  os << std::left << std::setw(12) << "labeled" << std::right << std::setw(8) << st.human_total()
     << std::setw(9) << st.machine_total() << std::setw(8) << st.labeled_total() << "\n";
  os << "unlabeled " << st.unlabeled << "\nrecords " << st.total() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands. Each receives the fully layered config.

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

int CmdIngest(RunConfig cfg, Io io) {
  const std::string format = cfg.String("format", "without-extended");
  cfg.Set("format", format);
  CsvFormat fmt;
  if (format == "with-extended") fmt = CsvFormat::kWithExtended;
  else if (format == "without-extended") fmt = CsvFormat::kWithoutExtended;
  else Fail(ErrorKind::kValidation, "--format must be with-extended or without-extended");
  const std::string in = Required(cfg, "in");
  const std::string out = Required(cfg, "out");
  EchoConfig(cfg, io.err);
  const IngestResult res = IngestCsv(fs::path(in), fmt);
  for (const RowIssue& issue : res.issues) {
    io.err << "row " << issue.row << ": " << issue.message << "\n";
  }
  WriteCorpus(res.records, fs::path(out));
  io.out << "ingested " << res.records.size() << " records (" << res.issues.size()
         << " rows skipped) -> " << out << "\n";
  return 0;
}

int CmdStats(RunConfig cfg, Io io) {
  const std::string in = Required(cfg, "in");
  EchoConfig(cfg, io.err);
  const Corpus records = ReadRecords(fs::path(in));
  io.out << StatsTable(records);
  return 0;
}

int CmdExtend(RunConfig cfg, Io io) {
  const std::string in = Required(cfg, "in");
  const std::string out = Required(cfg, "out");
  ExtendOptions opts;
  opts.threads = static_cast<unsigned>(cfg.Size("threads", 0));
  EchoConfig(cfg, io.err);
  Corpus records = ReadRecords(fs::path(in));
  const Gazetteer gaz = BuildGazetteer(records);
  records = ExtendCorpus(std::move(records), gaz, DefaultVerbLexicon(), opts);
  WriteCorpus(records, fs::path(out));
  io.out << "extended " << records.size() << " records (gazetteer " << gaz.size()
         << " terms) -> " << out << "\n";
  return 0;
}

int CmdBuildVocab(RunConfig cfg, Io io) {
  const std::string in = Required(cfg, "in");
  const std::string out = Required(cfg, "out");
  const auto feature_set = FeatureSetFromName(cfg.String("feature", "title"));
  if (!feature_set) Fail(ErrorKind::kValidation, "unknown feature '" + cfg.String("feature") + "'");
  VocabularyOptions opts;
  opts.max_size = cfg.Size("vocab_max_size", opts.max_size);
  opts.min_df = cfg.Size("min_df", opts.min_df);
  cfg.Set("feature", std::string(FeatureSetName(*feature_set)));
  cfg.Set("vocab_max_size", std::to_string(opts.max_size));
  cfg.Set("min_df", std::to_string(opts.min_df));
  EchoConfig(cfg, io.err);
  const Vocabulary vocab = BuildVocabulary(ReadRecords(fs::path(in)), *feature_set, opts);
  MakeParent(out);
  vocab.Save(out);
  io.out << "vocabulary " << vocab.size() << " entries -> " << out << "\n";
  return 0;
}

int CmdTrain(RunConfig cfg, Io io) {
  const std::string in = Required(cfg, "in");
  const TrainRequest req = TrainRequestFromConfig(cfg);
  StoreTrainRequest(req, cfg);
  const SplitRatios ratios = RatiosFromConfig(cfg);
  cfg.Set("corpus_digest", FileDigest(in));
  const std::string run_id = ContentId(cfg);
  const fs::path dir = cfg.Has("out") ? fs::path(cfg.String("out")) : DataDir() / "runs" / run_id;
  cfg.Set("out", dir.string());
  cfg.Set("run_id", run_id);
  EchoConfig(cfg, io.err);

  const Corpus records = Labeled(ReadRecords(fs::path(in)));
  const DatasetSplit split = SplitStratified(records, ratios, req.train.seed);
  const TrainedModel tm = TrainOnRecords(SelectById(records, split.train_ids), req);

  fs::create_directories(dir);
  SaveModel(tm.model, dir / "model.bin");
  WriteText(dir / "model.summary.txt", ModelSummary(tm.model));
  tm.vocab.Save(dir / "vocab.txt");
  WriteText(dir / "run.config", cfg.Serialize());
  std::ostringstream log;
  log << "epoch,mean_loss,train_accuracy\n";
  for (const EpochRecord& e : tm.log.epochs) {
    log << e.epoch << "," << Num(e.mean_loss) << "," << Num(e.train_accuracy) << "\n";
  }
  WriteText(dir / "train_log.csv", log.str());
  io.out << "trained " << ModelKindName(req.kind) << " on " << split.train_ids.size()
         << " records -> " << dir.string() << "\n";
  return 0;
}

int CmdEvaluate(RunConfig cfg, Io io) {
  const fs::path run = Required(cfg, "run");
  RunConfig trained = RunConfig::Load(run / "run.config");
  const std::string in = cfg.String("in", trained.String("in"));
  if (in.empty()) Fail(ErrorKind::kValidation, "missing required --in");
  const std::string split_name = cfg.String("split", "test");
  const TrainRequest req = TrainRequestFromConfig(trained);
  RunConfig ratios_cfg = trained;
  const SplitRatios ratios = RatiosFromConfig(ratios_cfg);
  const std::string digest = FileDigest(in);
  if (trained.Has("corpus_digest") && trained.String("corpus_digest") != digest) {
    io.err << "warning: " << in << " differs from the corpus the model was trained on\n";
  }
  const std::string run_id = trained.String("run_id", run.filename().string());
  const fs::path dir =
      cfg.Has("out") ? fs::path(cfg.String("out")) : DataDir() / "reports" / run_id / split_name;
  RunConfig resolved = trained;
  resolved.Set("in", in);
  resolved.Set("run", run.string());
  resolved.Set("split", split_name);
  resolved.Set("out", dir.string());
  EchoConfig(resolved, io.err);

  const Corpus records = Labeled(ReadRecords(fs::path(in)));
  const DatasetSplit split = SplitStratified(records, ratios, req.train.seed);
  Corpus part;
  if (split_name == "train") part = SelectById(records, split.train_ids);
  else if (split_name == "val") part = SelectById(records, split.val_ids);
  else if (split_name == "test") part = SelectById(records, split.test_ids);
  else if (split_name == "all") part = records;
  else Fail(ErrorKind::kValidation, "--split must be train, val, test or all");

  const AnyModel model = LoadModel(run / "model.bin");
  const Vocabulary vocab = Vocabulary::Load(run / "vocab.txt");
  const Evaluation eval = Evaluate(model, vocab, part, req.feature, split_name, req.SequenceLength());
  WriteEvaluation(eval, dir);
  WriteText(dir / "config.txt", resolved.Serialize());
  io.out << eval.report.FormatTable();
  io.out << "report -> " << dir.string() << "\n";
  return 0;
}

int CmdExperiment(RunConfig cfg, Io io) {
  const std::string in = Required(cfg, "in");
  ExperimentConfig ex;
  ex.base = TrainRequestFromConfig(cfg);
  ex.ratios = RatiosFromConfig(cfg);
  ex.seed = ex.base.train.seed;
  if (cfg.Has("features")) {
    ex.features.clear();
    for (const std::string& f : SplitList(cfg.String("features"))) {
      const auto feature_set = FeatureSetFromName(f);
      if (!feature_set) Fail(ErrorKind::kValidation, "unknown feature '" + f + "'");
      ex.features.push_back(*feature_set);
    }
  }
  if (cfg.Has("models")) {
    ex.models.clear();
    for (const std::string& m : SplitList(cfg.String("models"))) {
      const auto kind = ModelKindFromName(m);
      if (!kind) Fail(ErrorKind::kValidation, "unknown model '" + m + "'");
      ex.models.push_back(*kind);
    }
  }
  if (cfg.Has("equalize")) ex.equalize_per_genre = cfg.Size("equalize", 0);
  ex.block_size = cfg.Size("block_size", 0);

  std::string features, models;
  for (FeatureSet f : ex.features) features += (features.empty() ? "" : ",") + std::string(FeatureSetName(f));
  for (ModelKind m : ex.models) models += (models.empty() ? "" : ",") + std::string(ModelKindName(m));
  // Per-cell model/feature come from these lists.
  RunConfig resolved = cfg;
  StoreTrainRequest(ex.base, resolved);
  resolved.Set("features", features);
  resolved.Set("models", models);
  resolved.Set("block_size", std::to_string(ex.block_size));
  resolved.Set("corpus_digest", FileDigest(in));
  const std::string run_id = ContentId(resolved);
  const fs::path dir = cfg.Has("out") ? fs::path(cfg.String("out")) : DataDir() / "experiments" / run_id;
  resolved.Set("out", dir.string());
  resolved.Set("run_id", run_id);
  EchoConfig(resolved, io.err);

  const ExperimentResult res = RunExperiment(ReadRecords(fs::path(in)), ex);
  fs::create_directories(dir);
  WriteText(dir / "results.csv", ExperimentCsv(res.rows));
  const std::string table = ExperimentTable(res.rows);
  WriteText(dir / "results.txt", table);
  WriteText(dir / "config.txt", resolved.Serialize());
  io.out << table << "results -> " << dir.string() << "\n";
  return 0;
}

int CmdEqualize(RunConfig cfg, Io io) {
  const std::string in = Required(cfg, "in");
  const std::string out = Required(cfg, "out");
  Required(cfg, "per_genre");
  const std::size_t n = cfg.Size("per_genre", 0);
  const std::uint64_t seed = cfg.U64("seed", 0);
  cfg.Set("seed", std::to_string(seed));
  EchoConfig(cfg, io.err);
  const Corpus eq = Equalize(ReadRecords(fs::path(in)), n, seed);
  WriteCorpus(eq, fs::path(out));
  io.out << "equalized " << eq.size() << " records -> " << out << "\n";
  return 0;
}

int CmdGenSynthetic(RunConfig cfg, Io io) {
  const std::string out = Required(cfg, "out");
  SyntheticConfig syn = DefaultSyntheticConfig();
  syn.per_genre = cfg.Size("per_genre", syn.per_genre);
  syn.mixing_rate = cfg.Double("mixing_rate", syn.mixing_rate);
  syn.title_words = cfg.Size("title_words", syn.title_words);
  syn.ner_items = cfg.Size("ner_items", syn.ner_items);
  syn.min_steps = cfg.Size("min_steps", syn.min_steps);
  syn.max_steps = cfg.Size("max_steps", syn.max_steps);
  syn.seed = cfg.U64("seed", syn.seed);
  cfg.Set("per_genre", std::to_string(syn.per_genre));
  cfg.Set("mixing_rate", Num(syn.mixing_rate));
  cfg.Set("title_words", std::to_string(syn.title_words));
  cfg.Set("ner_items", std::to_string(syn.ner_items));
  cfg.Set("min_steps", std::to_string(syn.min_steps));
  cfg.Set("max_steps", std::to_string(syn.max_steps));
  cfg.Set("seed", std::to_string(syn.seed));
  EchoConfig(cfg, io.err);
  const Corpus records = GenerateSynthetic(syn);
  WriteCorpus(records, fs::path(out));
  io.out << "generated " << records.size() << " records -> " << out << "\n";
  return 0;
}

int CmdKappa(RunConfig cfg, Io io) {
  const std::string in = Required(cfg, "in");
  EchoConfig(cfg, io.err);
  const KappaTable table = ReadKappaCsv(fs::path(in));
  const KappaResult k = FleissKappa(table);
  io.out << "items " << table.items() << "\nraters " << table.Raters() << "\n";
  io.out << "mean_agreement " << Num(k.mean_agreement) << "\nchance_agreement "
         << Num(k.chance_agreement) << "\n";
  if (k.degenerate) io.out << "kappa undefined (chance agreement is 1)\n";
  else io.out << "kappa " << Num(k.kappa) << "\n";
  return 0;
}

SessionConfig SessionConfigFrom(RunConfig& cfg) {
  SessionConfig sc;
  const auto feature_set = FeatureSetFromName(cfg.String("feature", "title"));
  if (!feature_set) Fail(ErrorKind::kValidation, "unknown feature '" + cfg.String("feature") + "'");
  sc.feature = *feature_set;
  sc.tau = cfg.Double("tau", sc.tau);
  sc.batch = cfg.Size("batch", sc.batch);
  sc.seed = cfg.U64("seed", sc.seed);
  sc.vocabulary.max_size = cfg.Size("vocab_max_size", sc.vocabulary.max_size);
  sc.vocabulary.min_df = cfg.Size("min_df", sc.vocabulary.min_df);
  sc.Validate();
  cfg.Set("feature", std::string(FeatureSetName(sc.feature)));
  cfg.Set("tau", Num(sc.tau));
  cfg.Set("batch", std::to_string(sc.batch));
  cfg.Set("seed", std::to_string(sc.seed));
  return sc;
}

void ShowQuery(const AnnotationSession& s, RecordId id, std::ostream& out) {
  const RecipeRecord& r = s.Record(id);
  const QueryView view = s.Inspect(id);
  out << "\n#" << r.id << "  " << r.title << "\n";
  for (std::size_t i = 0; i < r.directions.size(); ++i) out << "  " << i + 1 << ". " << r.directions[i] << "\n";
  if (r.extended_ner && !r.extended_ner->empty()) {
    out << "  entities:";
    for (const Entity& e : *r.extended_ner) out << " " << e.normalized << " [" << EntityCategoryName(e.category) << "]";
    out << "\n";
  }
  if (!view.votes.empty()) {
    out << "  committee:";
    for (Genre g : view.votes) out << " " << GenreName(g);
    out << "  (entropy " << std::fixed << std::setprecision(4) << view.entropy << std::defaultfloat << ")\n";
  }
}

std::string GenreMenu() {
  std::string m;
  for (Genre g : kAllGenres) m += std::to_string(GenreId(g)) + "=" + std::string(GenreName(g)) + " ";
  return m;
}

int CmdAnnotate(RunConfig cfg, Io io) {
  const bool resume = cfg.String("resume", "false") == "true";
  const fs::path checkpoint =
      cfg.Has("checkpoint") ? fs::path(cfg.String("checkpoint")) : DataDir() / "sessions" / "annotate.session";
  cfg.Set("checkpoint", checkpoint.string());
  const std::size_t max_rounds = cfg.Size("rounds", 0);
  std::optional<AnnotationSession> session;
  if (resume) {
    EchoConfig(cfg, io.err);
    session.emplace(AnnotationSession::Load(checkpoint));
    io.out << "resumed at round " << session->round() << ", pool " << session->pool_size() << "\n";
  } else {
    const std::string in = Required(cfg, "in");
    const SessionConfig sc = SessionConfigFrom(cfg);
    EchoConfig(cfg, io.err);
    Corpus records = ReadRecords(fs::path(in));
    if (sc.feature == FeatureSet::kTitleExtNer &&
        std::any_of(records.begin(), records.end(), [](const RecipeRecord& r) { return !r.extended_ner; })) {
      records = ExtendCorpus(std::move(records), BuildGazetteer(records));
    }
    session.emplace(std::move(records), sc);
  }
  AnnotationSession& s = *session;
  io.out << "labels: " << GenreMenu() << "(s skips, q saves and quits)\n";
  bool quit = false;
  for (std::size_t done = 0; !quit && s.pool_size() > 0 && (max_rounds == 0 || done < max_rounds); ++done) {
    std::map<RecordId, Genre> labels;
    for (RecordId id : s.pending()) {
      ShowQuery(s, id, io.out);
      for (;;) {
        io.out << "label> " << std::flush;
        std::string line;
        if (!std::getline(io.in, line)) { quit = true; break; }
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line == "q") { quit = true; break; }
        if (line == "s" || line.empty()) break;
        char* end = nullptr;
        const long v = std::strtol(line.c_str(), &end, 10);
        const auto g = (end && *end == '\0') ? GenreFromId(v) : std::nullopt;
        if (g) { labels[id] = *g; break; }
        io.out << "enter 1-9, s or q\n";
      }
      if (quit) break;
    }
    if (quit && labels.empty()) break;
    const RoundSummary sum = s.RunRound(labels);
    io.out << "round " << sum.round << ": human " << sum.human_labeled << ", auto " << sum.auto_labeled
           << ", queried " << sum.queried.size() << ", pool " << sum.pool_remaining << "\n";
    MakeParent(checkpoint);
    s.Save(checkpoint);
    if (sum.human_labeled == 0 && sum.auto_labeled == 0 && sum.queried.empty()) break;
  }
  MakeParent(checkpoint);
  s.Save(checkpoint);
  if (cfg.Has("out")) WriteCorpus(s.records(), fs::path(cfg.String("out")));
  io.out << "session saved -> " << checkpoint.string() << "\n";
  return 0;
}

int CmdServe(RunConfig cfg, Io io) {
  const std::string host = cfg.String("host", "127.0.0.1");
  const int port = static_cast<int>(cfg.Size("port", 8080));
  const fs::path data = cfg.Has("data_dir") ? fs::path(cfg.String("data_dir")) : DataDir();
  cfg.Set("host", host);
  cfg.Set("port", std::to_string(port));
  cfg.Set("data_dir", data.string());
  EchoConfig(cfg, io.err);
  ServiceOptions opts;
  opts.data_dir = data;
  AnnotationService service(opts);
  if (cfg.Has("corpus")) {
    for (const std::string& path : SplitList(cfg.String("corpus"))) {
      service.AddCorpus(fs::path(path).stem().string(), ReadRecords(fs::path(path)));
    }
  }
  httplib::Server server;
  service.Mount(server);
  io.out << "listening on http://" << host << ":" << port << "/v1/" << std::endl;
  if (!server.listen(host, port)) Fail(ErrorKind::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

int ExitCodeFor(ErrorKind kind) {
  return kind == ErrorKind::kNumeric || kind == ErrorKind::kInternal ? 2 : 1;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"recipeforge: recipe genre classification and annotation toolkit", "recipeforge"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  RunConfig flags;
  std::string config_path;
  using Handler = std::function<int(RunConfig, Io)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto command = [&](const std::string& name, const std::string& about, Handler h) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("--config", config_path, "key=value config file (flags override it)");
    sub->add_option_function<std::string>(
        "--seed", [&flags](const std::string& v) { flags.Set("seed", v); }, "Random seed");
    commands.emplace_back(sub, std::move(h));
    return sub;
  };
  auto opt = [&flags](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.Set(key, v); }, help);
  };
  auto train_opts = [&](CLI::App* sub) {
    opt(sub, "--model", "model", "nb, logreg, svm, mlp or forest");
    opt(sub, "--feature", "feature", "title, title-ner, title-ext-ner or directions");
    opt(sub, "--lr", "lr", "Peak learning rate");
    opt(sub, "--batch", "batch", "Mini-batch size");
    opt(sub, "--epochs", "epochs", "Training epochs");
    opt(sub, "--warmup", "warmup", "Warmup fraction of steps");
    opt(sub, "--weight-decay", "weight_decay", "L2 weight decay");
    opt(sub, "--alpha", "alpha", "Naive Bayes smoothing");
    opt(sub, "--trees", "trees", "Forest size");
    opt(sub, "--max-depth", "max_depth", "Forest tree depth");
    opt(sub, "--max-features", "max_features", "Features scored per split");
    opt(sub, "--embedding-dim", "embedding_dim", "MLP embedding width");
    opt(sub, "--hidden", "hidden", "MLP hidden widths, comma separated");
    opt(sub, "--max-len", "max_len", "MLP sequence length in tokens");
    opt(sub, "--vocab-max-size", "vocab_max_size", "Vocabulary cap including special tokens");
    opt(sub, "--min-df", "min_df", "Minimum document frequency");
    opt(sub, "--split-train", "split_train", "Train fraction");
    opt(sub, "--split-val", "split_val", "Validation fraction");
    opt(sub, "--split-test", "split_test", "Test fraction");
  };

  CLI::App* sub = command("ingest", "Convert a dataset CSV into a record file", CmdIngest);
  opt(sub, "--in", "in", "Input CSV");
  opt(sub, "--out", "out", "Output record file");
  opt(sub, "--format", "format", "with-extended or without-extended");

  sub = command("stats", "Per-genre counts by provenance", CmdStats);
  opt(sub, "--in", "in", "Record file");

  sub = command("extend-ner", "Compute extended entity sets", CmdExtend);
  opt(sub, "--in", "in", "Record file");
  opt(sub, "--out", "out", "Output record file");
  opt(sub, "--threads", "threads", "Worker threads (0: all cores)");

  sub = command("build-vocab", "Build a vocabulary file", CmdBuildVocab);
  opt(sub, "--in", "in", "Record file");
  opt(sub, "--out", "out", "Vocabulary file");
  opt(sub, "--feature", "feature", "Feature text to count");
  opt(sub, "--vocab-max-size", "vocab_max_size", "Vocabulary cap including special tokens");
  opt(sub, "--min-df", "min_df", "Minimum document frequency");

  sub = command("train", "Train a model on the train split", CmdTrain);
  opt(sub, "--in", "in", "Record file");
  opt(sub, "--out", "out", "Run directory (default <data>/runs/<run-id>)");
  train_opts(sub);

  sub = command("evaluate", "Evaluate a trained run", CmdEvaluate);
  opt(sub, "--run", "run", "Run directory written by train");
  opt(sub, "--in", "in", "Record file (default: the training corpus)");
  opt(sub, "--split", "split", "train, val, test or all");
  opt(sub, "--out", "out", "Report directory (default <data>/reports/<run-id>/<split>)");

  sub = command("experiment", "Feature x model matrix with per-block splits", CmdExperiment);
  opt(sub, "--in", "in", "Record file");
  opt(sub, "--out", "out", "Output directory (default <data>/experiments/<run-id>)");
  opt(sub, "--features", "features", "Comma-separated feature sets");
  opt(sub, "--models", "models", "Comma-separated model kinds");
  opt(sub, "--equalize", "equalize", "Sample this many records per genre first");
  opt(sub, "--block-size", "block_size", "Records per block (0: whole corpus)");
  train_opts(sub);

  sub = command("equalize", "Sample exactly n records per genre", CmdEqualize);
  opt(sub, "--in", "in", "Record file");
  opt(sub, "--out", "out", "Output record file");
  opt(sub, "--per-genre", "per_genre", "Records per genre");

  sub = command("annotate", "Interactive query-by-committee labeling", CmdAnnotate);
  opt(sub, "--in", "in", "Record file with seed labels and an unlabeled pool");
  opt(sub, "--out", "out", "Write the labeled corpus here at the end");
  opt(sub, "--checkpoint", "checkpoint", "Session file (default <data>/sessions/annotate.session)");
  opt(sub, "--feature", "feature", "Committee feature set");
  opt(sub, "--tau", "tau", "Auto-label confidence threshold in (0, 1]");
  opt(sub, "--batch", "batch", "Queries per round");
  opt(sub, "--rounds", "rounds", "Stop after this many rounds (0: until the pool is empty)");
  opt(sub, "--vocab-max-size", "vocab_max_size", "Vocabulary cap including special tokens");
  opt(sub, "--min-df", "min_df", "Minimum document frequency");
  sub->add_flag_callback("--resume", [&flags] { flags.Set("resume", "true"); }, "Continue from the checkpoint");

  sub = command("serve", "Run the annotation HTTP service", CmdServe);
  opt(sub, "--host", "host", "Bind address");
  opt(sub, "--port", "port", "Port");
  opt(sub, "--data-dir", "data_dir", "Directory holding <corpus>.rec files");
  opt(sub, "--corpus", "corpus", "Record files to register (id = file stem), comma separated");

  sub = command("gen-synthetic", "Generate a keyword/noise synthetic corpus", CmdGenSynthetic);
  opt(sub, "--out", "out", "Output record file");
  opt(sub, "--per-genre", "per_genre", "Records per genre");
  opt(sub, "--mixing-rate", "mixing_rate", "Probability a word comes from the genre pool");
  opt(sub, "--title-words", "title_words", "Words per title");
  opt(sub, "--ner-items", "ner_items", "Entity list length");
  opt(sub, "--min-steps", "min_steps", "Minimum direction steps");
  opt(sub, "--max-steps", "max_steps", "Maximum direction steps");

  sub = command("kappa", "Fleiss' kappa from item_id,rater_id,label rows", CmdKappa);
  opt(sub, "--in", "in", "Ratings CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const CLI::App* active = &app;
    for (const auto& [s, h] : commands) {
      if (s->parsed()) active = s;
    }
    if (e.get_exit_code() == 0) {  // --help
      out << active->help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << active->help();
    return 1;
  }

  for (const auto& [s, handler] : commands) {
    if (!s->parsed()) continue;
    try {
      RunConfig cfg;
      if (!config_path.empty()) {
        cfg = RunConfig::Load(config_path);
        cfg.Set("config", config_path);
      }
      cfg.Merge(flags);
      return handler(std::move(cfg), Io{in, out, err});
    } catch (const Error& e) {
      err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
      return ExitCodeFor(e.kind());
    } catch (const std::exception& e) {
      err << "internal error: " << e.what() << "\n";
      return 2;
    }
  }
  return 1;
}

}  // namespace recipeforge
