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

#ifndef RECIPEFORGE_SERVICE_HPP_
#define RECIPEFORGE_SERVICE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "recipeforge/active_learning.hpp"
#include "recipeforge/corpus.hpp"

namespace httplib {
class Server;
}

namespace recipeforge {

struct ServiceOptions {
  // Corpora not registered explicitly are looked up as <data_dir>/<id>.rec.
  std::filesystem::path data_dir = ".";
  CommitteeConfig committee;
};

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Annotation REST API, versioned under /v1/. Handle() is transport-free so
// it can be exercised directly; Mount() binds it to an httplib server.
//
//   POST /v1/sessions               {corpus, feature?, tau?, batch?, seed?}
//   GET  /v1/sessions/{id}/next
//   POST /v1/sessions/{id}/label    {record_id, label}
//   POST /v1/sessions/{id}/round    {tau?}
//   GET  /v1/sessions/{id}/metrics
//   GET  /v1/corpus/{id}/stats
//
// Errors carry {"error": message}: 400 malformed body, 404 unknown
// session/corpus/route, 409 conflicting relabel, 422 invalid values.
class AnnotationService {
 public:
  explicit AnnotationService(ServiceOptions options = {});
  ~AnnotationService();

  void AddCorpus(const std::string& id, Corpus records);

  HttpReply Handle(const std::string& method, const std::string& path, const std::string& body);

  void Mount(httplib::Server& server);

 private:
  struct Session;

  HttpReply CreateSession(const std::string& body);
  HttpReply Next(Session& s);
  HttpReply Label(Session& s, const std::string& body);
  HttpReply Round(Session& s, const std::string& body);
  HttpReply Metrics(Session& s);
  HttpReply CorpusStatsReply(const std::string& id);

  std::shared_ptr<const Corpus> FindCorpus(const std::string& id);
  std::shared_ptr<Session> FindSession(const std::string& id);

  ServiceOptions options_;
  std::mutex registry_mu_;
  std::map<std::string, std::shared_ptr<const Corpus>> corpora_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_session_ = 1;
};

}  // namespace recipeforge

#endif  // RECIPEFORGE_SERVICE_HPP_
