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

#include "recipeforge/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <json.hpp>

#include "recipeforge/entities.hpp"
#include "recipeforge/error.hpp"

namespace recipeforge {
namespace {

using json = nlohmann::ordered_json;

HttpReply Reply(int status, const json& body) { return {status, body.dump()}; }

HttpReply ErrorReply(int status, const std::string& message) {
  return Reply(status, json{{"error", message}});
}

int StatusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kConflict: return 409;
    case ErrorKind::kValidation:
    case ErrorKind::kFormat:
    case ErrorKind::kParse:
    case ErrorKind::kNumeric: return 422;
    default: return 500;
  }
}

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json ParseBody(const std::string& body) {
  if (body.empty()) return json::object();
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw BadRequest(std::string("malformed JSON body: ") + e.what());
  }
  if (!j.is_object()) throw BadRequest("request body must be a JSON object");
  return j;
}

// Corpus and record ids may not escape the data directory.
bool SafeId(const std::string& id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return id.find("..") == std::string::npos;
}

std::vector<std::string> SplitPath(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

json StatsJson(const Corpus& records) {
  const CorpusStats st = ComputeCorpusStats(records);
  json genres = json::array();
  for (Genre g : kAllGenres) {
    const GenreCounts& c = st.of(g);
    genres.push_back({{"genre", std::string(GenreName(g))},
                      {"label", GenreId(g)},
                      {"human", c.human},
                      {"machine", c.machine},
                      {"total", c.total()}});
  }
  return {{"records", st.total()},       {"labeled", st.labeled_total()},
          {"human", st.human_total()},   {"machine", st.machine_total()},
          {"unlabeled", st.unlabeled},   {"genres", std::move(genres)}};
}

// Accepts an integer or an integral-valued number.
std::optional<long> AsInteger(const json& v) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<long>(d))) return static_cast<long>(d);
  }
  return std::nullopt;
}

}  // namespace

struct AnnotationService::Session {
  std::mutex mu;
  std::string id;
  std::string corpus;
  std::unique_ptr<AnnotationSession> state;
  // Labels submitted against the current query batch (first write wins).
  std::map<RecordId, Genre> submitted;
};

AnnotationService::AnnotationService(ServiceOptions options) : options_(std::move(options)) {}
AnnotationService::~AnnotationService() = default;

void AnnotationService::AddCorpus(const std::string& id, Corpus records) {
  for (const RecipeRecord& r : records) ValidateRecord(r);
  std::lock_guard<std::mutex> lock(registry_mu_);
  corpora_[id] = std::make_shared<const Corpus>(std::move(records));
}

std::shared_ptr<const Corpus> AnnotationService::FindCorpus(const std::string& id) {
  {
    std::lock_guard<std::mutex> lock(registry_mu_);
    if (const auto it = corpora_.find(id); it != corpora_.end()) return it->second;
  }
  if (!SafeId(id)) Fail(ErrorKind::kNotFound, "unknown corpus '" + id + "'");
  const auto path = options_.data_dir / (id + ".rec");
  if (!std::filesystem::exists(path)) Fail(ErrorKind::kNotFound, "unknown corpus '" + id + "'");
  auto loaded = std::make_shared<const Corpus>(ReadRecords(path));
  std::lock_guard<std::mutex> lock(registry_mu_);
  return corpora_.emplace(id, std::move(loaded)).first->second;
}

std::shared_ptr<AnnotationService::Session> AnnotationService::FindSession(const std::string& id) {
  std::lock_guard<std::mutex> lock(registry_mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) Fail(ErrorKind::kNotFound, "unknown session '" + id + "'");
  return it->second;
}

HttpReply AnnotationService::Handle(const std::string& method, const std::string& path,
                                    const std::string& body) {
  try {
    const auto parts = SplitPath(path);
    if (parts.empty() || parts[0] != "v1") return ErrorReply(404, "no route " + path);
    if (method == "POST" && parts.size() == 2 && parts[1] == "sessions") return CreateSession(body);
    if (parts.size() == 4 && parts[1] == "corpus" && parts[3] == "stats" && method == "GET") {
      return CorpusStatsReply(parts[2]);
    }
    if (parts.size() == 4 && parts[1] == "sessions") {
      const std::string& action = parts[3];
      const bool known = (method == "GET" && (action == "next" || action == "metrics")) ||
                         (method == "POST" && (action == "label" || action == "round"));
      if (!known) return ErrorReply(404, "no route " + method + " " + path);
      const auto session = FindSession(parts[2]);
      std::lock_guard<std::mutex> lock(session->mu);
      if (action == "next") return Next(*session);
      if (action == "metrics") return Metrics(*session);
      if (action == "label") return Label(*session, body);
      return Round(*session, body);
    }
    return ErrorReply(404, "no route " + method + " " + path);
  } catch (const BadRequest& e) {
    return ErrorReply(400, e.what());
  } catch (const Error& e) {
    return ErrorReply(StatusFor(e.kind()), e.what());
  } catch (const std::exception& e) {
    return ErrorReply(500, e.what());
  }
}

HttpReply AnnotationService::CreateSession(const std::string& body) {
  const json req = ParseBody(body);
  if (!req.contains("corpus") || !req["corpus"].is_string()) {
    return ErrorReply(422, "field 'corpus' (string) is required");
  }
  const std::string corpus_id = req["corpus"].get<std::string>();
  SessionConfig cfg;
  cfg.committee = options_.committee;
  if (req.contains("feature")) {
    const auto feature_set = req["feature"].is_string()
                          ? FeatureSetFromName(req["feature"].get<std::string>())
                          : std::nullopt;
    if (!feature_set) return ErrorReply(422, "unknown feature; use title, title-ner, title-ext-ner, directions");
    cfg.feature = *feature_set;
  }
  if (req.contains("tau")) {
    if (!req["tau"].is_number()) return ErrorReply(422, "'tau' must be a number in (0, 1]");
    cfg.tau = req["tau"].get<double>();
  }
  if (req.contains("batch")) {
    const auto b = AsInteger(req["batch"]);
    if (!b || *b < 1) return ErrorReply(422, "'batch' must be a positive integer");
    cfg.batch = static_cast<std::size_t>(*b);
  }
  if (req.contains("seed")) {
    const auto s = AsInteger(req["seed"]);
    if (!s || *s < 0) return ErrorReply(422, "'seed' must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(*s);
  }
  cfg.Validate();
  const auto corpus = FindCorpus(corpus_id);
  Corpus records = *corpus;
  if (cfg.feature == FeatureSet::kTitleExtNer) {
    const bool missing = std::any_of(records.begin(), records.end(),
                                     [](const RecipeRecord& r) { return !r.extended_ner; });
    if (missing) records = ExtendCorpus(std::move(records), BuildGazetteer(records));
  }
  auto session = std::make_shared<Session>();
  session->corpus = corpus_id;
  session->state = std::make_unique<AnnotationSession>(std::move(records), cfg);
  std::lock_guard<std::mutex> lock(registry_mu_);
  session->id = "s" + std::to_string(next_session_++);
  sessions_[session->id] = session;
  return Reply(201, json{{"session_id", session->id}});
}

HttpReply AnnotationService::Next(Session& s) {
  const AnnotationSession& st = *s.state;
  std::size_t remaining = 0;
  std::optional<RecordId> next;
  for (RecordId id : st.pending()) {
    if (s.submitted.count(id)) continue;
    ++remaining;
    if (!next) next = id;
  }
  json out;
  if (!next) {
    out["record_id"] = nullptr;
    out["remaining_in_batch"] = 0;
    out["pool_remaining"] = st.pool_size();
    return Reply(200, out);
  }
  const RecipeRecord& r = st.Record(*next);
  const QueryView view = st.Inspect(*next);
  out["record_id"] = r.id;
  out["title"] = r.title;
  out["directions"] = r.directions;
  json entities = json::array();
  if (r.extended_ner) {
    for (const Entity& e : *r.extended_ner) {
      entities.push_back({{"text", e.normalized},
                          {"surface", e.surface},
                          {"category", std::string(EntityCategoryName(e.category))}});
    }
  }
  out["extended_ner"] = std::move(entities);
  json votes = json::array();
  for (Genre g : view.votes) votes.push_back(GenreId(g));
  out["committee_votes"] = std::move(votes);
  out["vote_entropy"] = view.entropy;
  out["remaining_in_batch"] = remaining;
  out["pool_remaining"] = st.pool_size();
  return Reply(200, out);
}

HttpReply AnnotationService::Label(Session& s, const std::string& body) {
  const json req = ParseBody(body);
  const auto id = req.contains("record_id") ? AsInteger(req["record_id"]) : std::nullopt;
  if (!id) return ErrorReply(422, "field 'record_id' (integer) is required");
  const auto raw = req.contains("label") ? AsInteger(req["label"]) : std::nullopt;
  const auto genre = raw ? GenreFromId(*raw) : std::nullopt;
  if (!genre) return ErrorReply(422, "label must be an integer genre id in 1..9");
  const auto& pending = s.state->pending();
  if (std::find(pending.begin(), pending.end(), *id) == pending.end()) {
    return ErrorReply(422, "record " + std::to_string(*id) + " is not in the current query batch");
  }
  auto remaining = [&] {
    std::size_t n = 0;
    for (RecordId p : pending) n += s.submitted.count(p) == 0;
    return n;
  };
  if (const auto it = s.submitted.find(*id); it != s.submitted.end()) {
    if (it->second == *genre) {
      // Replay of the accepted label: same outcome.
      return Reply(200, json{{"accepted", true}, {"remaining_in_batch", remaining()}});
    }
    return Reply(409, json{{"accepted", false},
                           {"error", "record " + std::to_string(*id) + " already labeled " +
                                         std::to_string(GenreId(it->second)) +
                                         "; first write wins"},
                           {"remaining_in_batch", remaining()}});
  }
  s.submitted.emplace(*id, *genre);
  return Reply(200, json{{"accepted", true}, {"remaining_in_batch", remaining()}});
}

HttpReply AnnotationService::Round(Session& s, const std::string& body) {
  const json req = ParseBody(body);
  std::optional<double> tau;
  if (req.contains("tau")) {
    if (!req["tau"].is_number()) return ErrorReply(422, "'tau' must be a number in (0, 1]");
    tau = req["tau"].get<double>();
    if (!(*tau > 0.0 && *tau <= 1.0)) return ErrorReply(422, "tau must lie in (0, 1]");
  }
  const RoundSummary sum = s.state->RunRound(s.submitted, tau);
  s.submitted.clear();
  json auto_labels = json::array();
  for (const AutoLabel& a : sum.auto_labels) {
    auto_labels.push_back({{"record_id", a.id}, {"label", GenreId(a.label)}, {"confidence", a.confidence}});
  }
  return Reply(200, json{{"round", sum.round},
                         {"human_labeled", sum.human_labeled},
                         {"auto_labeled", sum.auto_labeled},
                         {"auto_labels", std::move(auto_labels)},
                         {"queried", sum.queried},
                         {"pool_remaining", sum.pool_remaining}});
}

HttpReply AnnotationService::Metrics(Session& s) {
  const AnnotationSession& st = *s.state;
  return Reply(200, json{{"session_id", s.id},
                         {"corpus", s.corpus},
                         {"round", st.round()},
                         {"labeled",
                          {{"human", st.human_labeled_total()},
                           {"machine", st.machine_labeled_total()},
                           {"seed", st.seed_labeled()}}},
                         {"labeled_total", st.labeled_size()},
                         {"pool_remaining", st.pool_size()},
                         {"pending_labels", s.submitted.size()},
                         {"committee_agreement", st.CommitteeAgreement()}});
}

HttpReply AnnotationService::CorpusStatsReply(const std::string& id) {
  const auto corpus = FindCorpus(id);
  json out = StatsJson(*corpus);
  out["corpus"] = id;
  return Reply(200, out);
}

void AnnotationService::Mount(httplib::Server& server) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpReply r = Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get(R"(/v1/.*)", forward);
  server.Post(R"(/v1/.*)", forward);
}

}  // namespace recipeforge
