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

#include "recipeforge/active_learning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "recipeforge/error.hpp"
#include "recipeforge/models/predict.hpp"
#include "recipeforge/random.hpp"

namespace recipeforge {

double VoteEntropy(std::span<const Genre> votes) {
  if (votes.size() < 2) Fail(ErrorKind::kValidation, "vote entropy needs at least 2 votes");
  std::array<std::size_t, kGenreCount> counts{};
  for (Genre g : votes) ++counts[GenreIndex(g)];
  // Summed over sorted counts so permuted histograms give bit-equal values.
  std::sort(counts.begin(), counts.end());
  const double m = static_cast<double>(votes.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / m;
    h -= p * std::log(p);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Committee

Committee::Committee(std::vector<AnyModel> members) : members_(std::move(members)) {
  if (members_.size() < 2) Fail(ErrorKind::kValidation, "a committee needs at least 2 members");
  for (const AnyModel& m : members_) {
    if (KindOf(m) == ModelKind::kMlp) {
      Fail(ErrorKind::kValidation, "committee members must be count-vector models");
    }
    if (InputDim(m) != InputDim(members_.front())) {
      Fail(ErrorKind::kValidation, "committee members disagree on vocabulary size");
    }
  }
}

Committee Committee::Train(const VectorDataset& data, const CommitteeConfig& cfg) {
  std::vector<AnyModel> members;
  for (std::size_t k = 0; k < cfg.members.size(); ++k) {
    TrainConfig tc = cfg.train;
    tc.seed = DeriveSeed(cfg.train.seed, streams::kCommittee, k);
    switch (cfg.members[k]) {
      case ModelKind::kNaiveBayes:
        members.emplace_back(NaiveBayesModel::Train(data, cfg.nb_alpha));
        break;
      case ModelKind::kLogReg:
        members.emplace_back(TrainLogReg(data, tc));
        break;
      case ModelKind::kSvm:
        members.emplace_back(TrainSvm(data, tc));
        break;
      case ModelKind::kForest: {
        ForestConfig fc = cfg.forest;
        fc.seed = tc.seed;
        members.emplace_back(ForestModel::Train(data, fc));
        break;
      }
      case ModelKind::kMlp:
        Fail(ErrorKind::kValidation, "the neural model cannot be a committee member");
    }
  }
  return Committee(std::move(members));
}

std::size_t Committee::dim() const { return members_.empty() ? 0 : InputDim(members_.front()); }

std::vector<Probabilities> Committee::MemberProbabilities(const CountVector& x) const {
  std::vector<Probabilities> out;
  out.reserve(members_.size());
  for (const AnyModel& m : members_) out.push_back(PredictVector(m, x));
  return out;
}

std::vector<Genre> Committee::Votes(const CountVector& x) const {
  std::vector<Genre> votes;
  for (const Probabilities& p : MemberProbabilities(x)) votes.push_back(PredictGenre(p));
  return votes;
}

std::vector<RecordId> SelectQueries(const Committee& committee, std::span<const PoolItem> pool,
                                    std::size_t b) {
  std::vector<std::pair<double, RecordId>> ranked;
  ranked.reserve(pool.size());
  for (const PoolItem& item : pool) {
    ranked.emplace_back(VoteEntropy(committee.Votes(item.features)), item.id);
  }
  // Entropies are compared exactly (see VoteEntropy).
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<RecordId> out;
  for (std::size_t k = 0; k < std::min(b, ranked.size()); ++k) out.push_back(ranked[k].second);
  return out;
}

namespace {

void CheckTau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    Fail(ErrorKind::kValidation, "confidence threshold must lie in (0, 1], got " + std::to_string(tau));
  }
}

}  // namespace

std::vector<AutoLabel> AutoLabelPool(const Committee& committee, std::span<const PoolItem> pool,
                                     double tau) {
  CheckTau(tau);
  std::vector<AutoLabel> out;
  for (const PoolItem& item : pool) {
    const auto probs = committee.MemberProbabilities(item.features);
    const Genre first = PredictGenre(probs.front());
    bool unanimous = true;
    double mean = 0.0;
    for (const Probabilities& p : probs) {
      unanimous = unanimous && PredictGenre(p) == first;
      mean += p[GenreIndex(first)];
    }
    if (!unanimous) continue;
    mean /= static_cast<double>(probs.size());
    if (mean >= tau) out.push_back({item.id, first, mean});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Session

void SessionConfig::Validate() const {
  CheckTau(tau);
  if (batch == 0) Fail(ErrorKind::kValidation, "query batch size must be positive");
  if (committee.members.size() < 2) {
    Fail(ErrorKind::kValidation, "a committee needs at least 2 members");
  }
  committee.train.Validate();
}

AnnotationSession::AnnotationSession(Corpus records, SessionConfig cfg)
    : cfg_(std::move(cfg)), records_(std::move(records)) {
  cfg_.Validate();
  for (std::size_t k = 0; k < records_.size(); ++k) {
    ValidateRecord(records_[k]);
    if (!position_.emplace(records_[k].id, k).second) {
      Fail(ErrorKind::kValidation, "duplicate record id " + std::to_string(records_[k].id));
    }
    if (!records_[k].labeled()) pool_.emplace(records_[k].id, true);
  }
  seed_labeled_ = records_.size() - pool_.size();
  // The vocabulary covers the pool too; it uses no labels.
  vocab_ = BuildVocabulary(records_, cfg_.feature, cfg_.vocabulary);
  features_.reserve(records_.size());
  for (const RecipeRecord& r : records_) {
    features_.push_back(Vectorize(ComposeFeatureText(r, cfg_.feature), vocab_));
  }
  TrainCommittee();
  const auto items = PoolItems(false);
  if (committee_) {
    pending_ = SelectQueries(*committee_, items, cfg_.batch);
  } else {
    for (std::size_t k = 0; k < std::min(cfg_.batch, items.size()); ++k) pending_.push_back(items[k].id);
  }
}

std::size_t AnnotationSession::CountProvenance(Provenance p) const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [p](const RecipeRecord& r) { return r.provenance == p; }));
}

std::vector<RecordId> AnnotationSession::pool_ids() const {
  std::vector<RecordId> ids;
  for (const auto& [id, unused] : pool_) ids.push_back(id);
  return ids;
}

const RecipeRecord& AnnotationSession::Record(RecordId id) const {
  const auto it = position_.find(id);
  if (it == position_.end()) Fail(ErrorKind::kNotFound, "no record with id " + std::to_string(id));
  return records_[it->second];
}

QueryView AnnotationSession::Inspect(RecordId id) const {
  QueryView view;
  view.id = id;
  Record(id);
  if (committee_) {
    view.votes = committee_->Votes(features_[position_.at(id)]);
    view.entropy = VoteEntropy(view.votes);
  }
  return view;
}

double AnnotationSession::CommitteeAgreement() const {
  if (!committee_ || pool_.empty()) return 1.0;
  std::size_t unanimous = 0;
  for (const auto& [id, unused] : pool_) {
    if (VoteEntropy(committee_->Votes(features_[position_.at(id)])) == 0.0) ++unanimous;
  }
  return static_cast<double>(unanimous) / static_cast<double>(pool_.size());
}

std::vector<PoolItem> AnnotationSession::PoolItems(bool exclude_pending) const {
  const std::set<RecordId> skip(pending_.begin(), pending_.end());
  std::vector<PoolItem> items;
  for (const auto& [id, unused] : pool_) {
    if (exclude_pending && skip.count(id)) continue;
    items.push_back({id, features_[position_.at(id)]});
  }
  return items;
}

void AnnotationSession::TrainCommittee() {
  VectorDataset data;
  data.dim = vocab_.size();
  for (std::size_t k = 0; k < records_.size(); ++k) {
    if (!records_[k].labeled()) continue;
    data.inputs.push_back(features_[k]);
    data.labels.push_back(*records_[k].genre);
  }
  if (data.size() == 0) {
    committee_.reset();
    return;
  }
  CommitteeConfig cc = cfg_.committee;
  cc.train.seed = DeriveSeed(cfg_.seed, streams::kCommittee, round_);
  committee_ = Committee::Train(data, cc);
}

RoundSummary AnnotationSession::RunRound(const std::map<RecordId, Genre>& human_labels,
                                         std::optional<double> tau) {
  const double threshold = tau.value_or(cfg_.tau);
  CheckTau(threshold);
  const std::set<RecordId> queried(pending_.begin(), pending_.end());
  for (const auto& [id, genre] : human_labels) {
    if (!queried.count(id)) {
      Fail(ErrorKind::kValidation, "record " + std::to_string(id) +
                                       " was not queried in this round; label rejected");
    }
    if (!GenreFromId(GenreId(genre))) {
      Fail(ErrorKind::kValidation, "label for record " + std::to_string(id) + " must be 1..9");
    }
  }

  RoundSummary summary;
  for (const auto& [id, genre] : human_labels) {
    RecipeRecord& r = records_[position_.at(id)];
    r.genre = genre;
    r.provenance = Provenance::kHuman;
    pool_.erase(id);
  }
  summary.human_labeled = human_labels.size();
  human_total_ += summary.human_labeled;
  pending_.clear();

  TrainCommittee();
  if (committee_ && !pool_.empty()) {
    summary.auto_labels = AutoLabelPool(*committee_, PoolItems(false), threshold);
    for (const AutoLabel& a : summary.auto_labels) {
      RecipeRecord& r = records_[position_.at(a.id)];
      r.genre = a.label;
      r.provenance = Provenance::kMachine;
      pool_.erase(a.id);
    }
    pending_ = SelectQueries(*committee_, PoolItems(false), cfg_.batch);
  } else {
    const auto items = PoolItems(false);
    for (std::size_t k = 0; k < std::min(cfg_.batch, items.size()); ++k) pending_.push_back(items[k].id);
  }
  summary.auto_labeled = summary.auto_labels.size();
  machine_total_ += summary.auto_labeled;
  summary.queried = pending_;
  summary.pool_remaining = pool_.size();
  summary.round = ++round_;
  return summary;
}

void AnnotationSession::Save(std::ostream& out) const {
  nlohmann::ordered_json header;
  header["session"] = 1;
  header["round"] = round_;
  header["tau"] = cfg_.tau;
  header["batch"] = cfg_.batch;
  header["seed"] = cfg_.seed;
  header["feature"] = std::string(FeatureSetName(cfg_.feature));
  header["vocab_max_size"] = cfg_.vocabulary.max_size;
  header["vocab_min_df"] = cfg_.vocabulary.min_df;
  header["pending"] = pending_;
  header["human_labeled"] = human_total_;
  header["machine_labeled"] = machine_total_;
  header["seed_labeled"] = seed_labeled_;
  out << header.dump() << '\n';
  WriteRecords(records_, out);
}

void AnnotationSession::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  Save(out);
}

AnnotationSession AnnotationSession::Load(std::istream& in, CommitteeConfig committee) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorKind::kFormat, "empty session checkpoint");
  nlohmann::json header;
  SessionConfig cfg;
  std::size_t round = 0;
  std::vector<RecordId> pending;
  std::size_t human = 0, machine = 0, seeded = 0;
  try {
    header = nlohmann::json::parse(line);
    if (header.value("session", 0) != 1) Fail(ErrorKind::kFormat, "not a session checkpoint");
    round = header.at("round").get<std::size_t>();
    cfg.tau = header.at("tau").get<double>();
    cfg.batch = header.at("batch").get<std::size_t>();
    cfg.seed = header.at("seed").get<std::uint64_t>();
    const auto feature_set = FeatureSetFromName(header.at("feature").get<std::string>());
    if (!feature_set) Fail(ErrorKind::kFormat, "unknown feature set in checkpoint");
    cfg.feature = *feature_set;
    cfg.vocabulary.max_size = header.value("vocab_max_size", cfg.vocabulary.max_size);
    cfg.vocabulary.min_df = header.value("vocab_min_df", cfg.vocabulary.min_df);
    pending = header.at("pending").get<std::vector<RecordId>>();
    human = header.value("human_labeled", std::size_t{0});
    machine = header.value("machine_labeled", std::size_t{0});
    seeded = header.value("seed_labeled", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("bad session header: ") + e.what());
  }
  cfg.committee = std::move(committee);
  Corpus records = ReadRecords(in);

  AnnotationSession s(std::move(records), std::move(cfg));
  // Re-derive the committee of the saved round (trained under round - 1),
  // then restore its queue.
  if (round > 0) {
    s.round_ = round - 1;
    s.TrainCommittee();
  }
  s.round_ = round;
  s.human_total_ = human;
  s.machine_total_ = machine;
  if (header.contains("seed_labeled")) s.seed_labeled_ = seeded;
  for (RecordId id : pending) {
    if (!s.InPool(id)) Fail(ErrorKind::kFormat, "pending id " + std::to_string(id) + " not in pool");
  }
  s.pending_ = std::move(pending);
  return s;
}

AnnotationSession AnnotationSession::Load(const std::filesystem::path& path,
                                          CommitteeConfig committee) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  return Load(in, std::move(committee));
}

// ---------------------------------------------------------------------------
// Fleiss kappa

void KappaTable::AddItem(std::vector<std::size_t> counts) {
  if (counts.size() != categories_) {
    Fail(ErrorKind::kValidation, "kappa row has " + std::to_string(counts.size()) +
                                     " categories, expected " + std::to_string(categories_));
  }
  rows_.push_back(std::move(counts));
}

std::size_t KappaTable::Raters() const {
  if (rows_.size() < 2) Fail(ErrorKind::kValidation, "kappa needs at least 2 items");
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::size_t sum = 0;
    for (std::size_t c : rows_[i]) sum += c;
    if (i == 0) n = sum;
    if (sum != n) {
      Fail(ErrorKind::kValidation, "item " + std::to_string(i) + " has " + std::to_string(sum) +
                                       " ratings, expected " + std::to_string(n));
    }
  }
  if (n < 2) Fail(ErrorKind::kValidation, "kappa needs at least 2 raters per item");
  return n;
}

KappaResult FleissKappa(const KappaTable& table) {
  const std::size_t n = table.Raters();
  const double nn = static_cast<double>(n);
  const double items = static_cast<double>(table.items());
  std::vector<double> column(table.categories(), 0.0);
  double p_sum = 0.0;
  for (const auto& row : table.rows()) {
    double sq = 0.0;
    for (std::size_t g = 0; g < row.size(); ++g) {
      const double r = static_cast<double>(row[g]);
      sq += r * r;
      column[g] += r;
    }
    p_sum += (sq - nn) / (nn * (nn - 1.0));
  }
  KappaResult out;
  out.mean_agreement = p_sum / items;
  for (double c : column) {
    const double p = c / (items * nn);
    out.chance_agreement += p * p;
  }
  if (out.chance_agreement >= 1.0) {
    out.degenerate = true;
    return out;
  }
  out.kappa = (out.mean_agreement - out.chance_agreement) / (1.0 - out.chance_agreement);
  return out;
}

KappaTable ReadKappaCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorKind::kFormat, "empty kappa file");
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    return s;
  };
  if (strip(line) != "item_id,rater_id,label") {
    Fail(ErrorKind::kFormat, "kappa file header must be item_id,rater_id,label");
  }
  std::map<std::string, std::vector<std::size_t>> counts;
  std::vector<std::string> order;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    line = strip(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string item, rater, label;
    if (!std::getline(ss, item, ',') || !std::getline(ss, rater, ',') || !std::getline(ss, label)) {
      Fail(ErrorKind::kFormat, "kappa row " + std::to_string(row) + ": expected 3 fields");
    }
    item = strip(item);
    rater = strip(rater);
    std::optional<Genre> g;
    try {
      std::size_t used = 0;
      label = strip(label);
      const long v = std::stol(label, &used);
      if (used == label.size()) g = GenreFromId(v);
    } catch (const std::exception&) {
    }
    if (!g) Fail(ErrorKind::kParse, "kappa row " + std::to_string(row) + ": label must be 1..9");
    if (!seen.emplace(item, rater).second) {
      Fail(ErrorKind::kValidation, "kappa row " + std::to_string(row) + ": rater " + rater +
                                       " rated item " + item + " twice");
    }
    auto [it, fresh] = counts.try_emplace(item, std::vector<std::size_t>(kGenreCount, 0));
    if (fresh) order.push_back(item);
    ++it->second[GenreIndex(*g)];
  }
  KappaTable table;
  for (const std::string& item : order) table.AddItem(counts[item]);
  return table;
}

KappaTable ReadKappaCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  return ReadKappaCsv(in);
}

}  // namespace recipeforge
