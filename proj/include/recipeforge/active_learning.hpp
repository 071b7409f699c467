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

#ifndef RECIPEFORGE_ACTIVE_LEARNING_HPP_
#define RECIPEFORGE_ACTIVE_LEARNING_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "recipeforge/corpus.hpp"
#include "recipeforge/features.hpp"
#include "recipeforge/models/model_io.hpp"

namespace recipeforge {

// Shannon entropy (nats) of the hard-vote distribution. Needs >= 2 votes.
double VoteEntropy(std::span<const Genre> votes);

struct CommitteeConfig {
  // Count-vector model kinds; the neural model is not a committee member.
  std::vector<ModelKind> members = {ModelKind::kNaiveBayes, ModelKind::kLogReg, ModelKind::kSvm};
  TrainConfig train = CommitteeTrainDefaults();
  double nb_alpha = 1.0;
  ForestConfig forest;
};

// Ensemble of classifiers sharing one vocabulary.
class Committee {
 public:
  Committee() = default;
  // Throws kValidation unless there are >= 2 count-vector members of equal
  // input dimension.
  explicit Committee(std::vector<AnyModel> members);

  // Every member is trained on the same data; member k uses seed
  // DeriveSeed(cfg.train.seed, kCommittee, k).
  static Committee Train(const VectorDataset& data, const CommitteeConfig& cfg);

  std::size_t size() const { return members_.size(); }
  std::size_t dim() const;
  const std::vector<AnyModel>& members() const { return members_; }

  std::vector<Probabilities> MemberProbabilities(const CountVector& x) const;
  std::vector<Genre> Votes(const CountVector& x) const;

 private:
  std::vector<AnyModel> members_;
};

struct PoolItem {
  RecordId id = 0;
  CountVector features;
};

// Pool ids ordered by vote entropy (descending, ties by ascending id), first
// min(b, |pool|) returned.
std::vector<RecordId> SelectQueries(const Committee& committee, std::span<const PoolItem> pool,
                                    std::size_t b);

struct AutoLabel {
  RecordId id = 0;
  Genre label = Genre::kBakery;
  double confidence = 0.0;  // mean member probability of `label`
};

// Records on which every member votes the same genre and the members' mean
// probability for it is >= tau. tau must lie in (0, 1].
std::vector<AutoLabel> AutoLabelPool(const Committee& committee, std::span<const PoolItem> pool,
                                     double tau);

// ---------------------------------------------------------------------------
// Annotation session

struct SessionConfig {
  FeatureSet feature = FeatureSet::kTitle;
  std::size_t batch = 10;  // queries per round
  double tau = 0.99;
  std::uint64_t seed = 0;
  CommitteeConfig committee;
  VocabularyOptions vocabulary;

  void Validate() const;
};

struct RoundSummary {
  std::size_t round = 0;
  std::size_t human_labeled = 0;  // labels ingested this round
  std::size_t auto_labeled = 0;
  std::vector<AutoLabel> auto_labels;
  std::vector<RecordId> queried;
  std::size_t pool_remaining = 0;
};

struct QueryView {
  RecordId id = 0;
  std::vector<Genre> votes;  // empty before the first committee exists
  double entropy = 0.0;
};

// Pool-based query-by-committee loop. Records that carry a genre form the
// labeled set; the rest form the pool.
class AnnotationSession {
 public:
  AnnotationSession(Corpus records, SessionConfig cfg);

  const SessionConfig& config() const { return cfg_; }
  const Corpus& records() const { return records_; }
  std::size_t round() const { return round_; }
  std::size_t pool_size() const { return pool_.size(); }
  std::size_t labeled_size() const { return records_.size() - pool_.size(); }
  std::size_t CountProvenance(Provenance p) const;
  // Labels produced by this session (seed labels excluded).
  std::size_t human_labeled_total() const { return human_total_; }
  std::size_t machine_labeled_total() const { return machine_total_; }
  // Records that were already labeled when the session started.
  std::size_t seed_labeled() const { return seed_labeled_; }
  std::vector<RecordId> pool_ids() const;
  const std::vector<RecordId>& pending() const { return pending_; }
  bool InPool(RecordId id) const { return pool_.count(id) > 0; }
  const RecipeRecord& Record(RecordId id) const;
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::optional<Committee>& committee() const { return committee_; }

  // Committee votes and their entropy for one record.
  QueryView Inspect(RecordId id) const;

  // Fraction of the pool on which the committee is unanimous (1 when no
  // committee or empty pool).
  double CommitteeAgreement() const;

  // One round: ingest human labels for pending queries, retrain the
  // committee on every labeled record, auto-label confident pool records and
  // queue the next query batch. Unanswered queries return to the pool.
  // Throws kValidation (session unchanged) when a label names a record that
  // is not a pending query. `tau` overrides the configured threshold.
  RoundSummary RunRound(const std::map<RecordId, Genre>& human_labels,
                        std::optional<double> tau = std::nullopt);

  // Header line (round, tau, batch, seed, feature, pending, label counters)
  // followed by the records in canonical form.
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static AnnotationSession Load(std::istream& in, CommitteeConfig committee = {});
  static AnnotationSession Load(const std::filesystem::path& path, CommitteeConfig committee = {});

 private:
  void TrainCommittee();
  std::vector<PoolItem> PoolItems(bool exclude_pending) const;

  SessionConfig cfg_;
  Corpus records_;
  std::map<RecordId, std::size_t> position_;
  std::map<RecordId, bool> pool_;  // ordered set of pool ids
  std::vector<RecordId> pending_;
  std::size_t round_ = 0;
  std::size_t human_total_ = 0;
  std::size_t machine_total_ = 0;
  std::size_t seed_labeled_ = 0;
  Vocabulary vocab_;
  std::vector<CountVector> features_;  // per record position
  std::optional<Committee> committee_;
};

// ---------------------------------------------------------------------------
// Fleiss kappa

// N items x K categories of rating counts with a constant number of raters.
class KappaTable {
 public:
  explicit KappaTable(std::size_t categories = kGenreCount) : categories_(categories) {}

  void AddItem(std::vector<std::size_t> counts);
  std::size_t items() const { return rows_.size(); }
  std::size_t categories() const { return categories_; }
  const std::vector<std::vector<std::size_t>>& rows() const { return rows_; }
  // Throws kValidation unless N >= 2, raters >= 2 and every row sums to the
  // same rater count.
  std::size_t Raters() const;

 private:
  std::size_t categories_;
  std::vector<std::vector<std::size_t>> rows_;
};

struct KappaResult {
  bool degenerate = false;  // chance agreement is 1, kappa undefined
  double kappa = 0.0;
  double mean_agreement = 0.0;    // P-bar
  double chance_agreement = 0.0;  // P-bar_e
};

KappaResult FleissKappa(const KappaTable& table);

// CSV with header item_id,rater_id,label (label 1..9).
KappaTable ReadKappaCsv(std::istream& in);
KappaTable ReadKappaCsv(const std::filesystem::path& path);

}  // namespace recipeforge

#endif  // RECIPEFORGE_ACTIVE_LEARNING_HPP_
