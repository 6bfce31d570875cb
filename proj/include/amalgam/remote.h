// Copyright 2026 The Amalgam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Wikidata API client. Search goes through wbsearchentities; records come
// from wbgetentities (claims, labels, aliases), so claims are parsed from
// the structured JSON instead of rendered wikitext.

#ifndef AMALGAM_REMOTE_H_
#define AMALGAM_REMOTE_H_

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "amalgam/kg.h"

namespace amalgam {

struct HttpResponse {
  int status = 0;
  std::string body;
  std::optional<std::chrono::milliseconds> retry_after;
};

// Thrown by a transport when no HTTP response was obtained at all.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Get(const std::string &base_url,
                           const std::multimap<std::string, std::string> &params,
                           const std::string &user_agent) = 0;
};

// cpp-httplib transport; supports http:// and https:// base URLs.
std::unique_ptr<HttpTransport> MakeHttpTransport(
    std::chrono::seconds timeout = std::chrono::seconds(30));

struct RemoteOptions {
  static constexpr const char *kDefaultBaseUrl =
      "https://www.wikidata.org/w/api.php";

  std::string base_url = kDefaultBaseUrl;
  std::string user_agent;  // Required by the Wikimedia API etiquette.
  std::string language = "en";
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  int max_in_flight = 4;
};

class RemoteKnowledgeGraph : public KnowledgeGraph {
 public:
  // Throws std::invalid_argument for an empty user agent or bad limits.
  RemoteKnowledgeGraph(RemoteOptions options,
                       std::unique_ptr<HttpTransport> transport);

  uint64_t requests() const { return requests_.load(); }

  // Fetches records for ids in one or more wbgetentities calls. Missing ids
  // are absent from the result.
  std::vector<EntityRecord> FetchEntities(const std::vector<std::string> &ids);

 protected:
  CandidateSet DoSearch(std::string_view query, int limit) override;
  EntityRecord DoGetEntity(const EntityId &id) override;

 private:
  nlohmann::json Call(const std::multimap<std::string, std::string> &params);
  void ResolveReferenceLabels(std::vector<EntityRecord> &records);

  RemoteOptions options_;
  std::unique_ptr<HttpTransport> transport_;
  std::counting_semaphore<64> in_flight_;
  std::atomic<uint64_t> requests_{0};
};

// Converts one wbgetentities "entities" member to a record. Returns nullopt
// for "missing" entities and entities without an English (or any) label.
std::optional<EntityRecord> ParseWikidataEntity(const nlohmann::json &entity,
                                                const std::string &language);

}  // namespace amalgam

#endif  // AMALGAM_REMOTE_H_
