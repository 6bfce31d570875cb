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

#include "amalgam/remote.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_map>

#include "amalgam/errors.h"
#include "amalgam/table.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace amalgam {

using nlohmann::json;

namespace {

constexpr size_t kIdsPerRequest = 50;

class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse Get(const std::string &base_url,
                   const std::multimap<std::string, std::string> &params,
                   const std::string &user_agent) override {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
      throw TransportError("base URL without scheme: " + base_url);
    }
    auto path_start = base_url.find('/', scheme_end + 3);
    std::string origin = base_url.substr(0, path_start);
    std::string path =
        path_start == std::string::npos ? "/" : base_url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    httplib::Headers headers{{"User-Agent", user_agent},
                             {"Accept", "application/json"}};
    httplib::Params query(params.begin(), params.end());
    auto res = client.Get(path, query, headers);
    if (!res) {
      throw TransportError("request to " + origin + " failed: " +
                           httplib::to_string(res.error()));
    }
    HttpResponse out{res->status, res->body, std::nullopt};
    if (res->has_header("Retry-After")) {
      try {
        out.retry_after =
            std::chrono::seconds(std::stoi(res->get_header_value("Retry-After")));
      } catch (const std::exception &) {
        // HTTP-date form; fall back to our own backoff.
      }
    }
    return out;
  }

 private:
  std::chrono::seconds timeout_;
};

const json *FindPath(const json &j, std::initializer_list<const char *> path) {
  const json *cur = &j;
  for (const char *key : path) {
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end()) return nullptr;
    cur = &*it;
  }
  return cur;
}

std::string LanguageValue(const json &entity, const char *field,
                          const std::string &language) {
  for (const std::string &lang : {language, std::string("mul")}) {
    if (const json *v = FindPath(entity, {field, lang.c_str(), "value"});
        v != nullptr && v->is_string()) {
      return v->get<std::string>();
    }
  }
  return {};
}

std::optional<ClaimValue> ParseSnak(const json &snak) {
  const json *type = FindPath(snak, {"snaktype"});
  if (type == nullptr || *type != "value") return std::nullopt;
  const json *dv = FindPath(snak, {"datavalue"});
  if (dv == nullptr) return std::nullopt;
  const json *dtype = FindPath(*dv, {"type"});
  const json *value = FindPath(*dv, {"value"});
  if (dtype == nullptr || value == nullptr || !dtype->is_string()) {
    return std::nullopt;
  }
  const std::string t = dtype->get<std::string>();
  if (t == "wikibase-entityid") {
    const json *id = FindPath(*value, {"id"});
    if (id != nullptr && id->is_string()) {
      if (auto eid = EntityId::Parse(id->get<std::string>())) {
        return EntityRef{*eid, ""};
      }
    }
    return std::nullopt;
  }
  if (t == "string" && value->is_string()) {
    return Literal{value->get<std::string>()};
  }
  if (t == "monolingualtext") {
    if (const json *text = FindPath(*value, {"text"}); text && text->is_string()) {
      return Literal{text->get<std::string>()};
    }
    return std::nullopt;
  }
  if (t == "quantity") {
    const json *amount = FindPath(*value, {"amount"});
    if (amount == nullptr || !amount->is_string()) return std::nullopt;
    try {
      double v = std::stod(amount->get<std::string>());
      if (std::isfinite(v)) return Quantity{v};
    } catch (const std::exception &) {
    }
    return std::nullopt;
  }
  if (t == "time") {
    if (const json *time = FindPath(*value, {"time"}); time && time->is_string()) {
      return Literal{time->get<std::string>()};
    }
  }
  return std::nullopt;
}

}  // namespace

std::unique_ptr<HttpTransport> MakeHttpTransport(std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(timeout);
}

std::optional<EntityRecord> ParseWikidataEntity(const json &entity,
                                                const std::string &language) {
  if (!entity.is_object() || entity.contains("missing")) return std::nullopt;
  const json *id = FindPath(entity, {"id"});
  if (id == nullptr || !id->is_string()) return std::nullopt;
  auto eid = EntityId::Parse(id->get<std::string>());
  if (!eid) return std::nullopt;

  EntityRecord record;
  record.id = *eid;
  record.label = NormalizeCell(LanguageValue(entity, "labels", language)).text();
  if (record.label.empty()) return std::nullopt;

  if (const json *aliases = FindPath(entity, {"aliases", language.c_str()});
      aliases != nullptr && aliases->is_array()) {
    for (const auto &a : *aliases) {
      if (const json *v = FindPath(a, {"value"}); v && v->is_string()) {
        std::string alias = NormalizeCell(v->get<std::string>()).text();
        if (!alias.empty()) record.aliases.push_back(std::move(alias));
      }
    }
  }

  if (const json *claims = FindPath(entity, {"claims"});
      claims != nullptr && claims->is_object()) {
    for (const auto &[prop, statements] : claims->items()) {
      if (!IsPropertyId(prop) || !statements.is_array()) continue;
      std::vector<ClaimValue> values;
      for (const auto &st : statements) {
        if (const json *rank = FindPath(st, {"rank"});
            rank != nullptr && *rank == "deprecated") {
          continue;
        }
        const json *snak = FindPath(st, {"mainsnak"});
        if (snak == nullptr) continue;
        if (auto v = ParseSnak(*snak)) values.push_back(std::move(*v));
      }
      if (!values.empty()) record.claims[prop] = std::move(values);
    }
  }
  record.classes = DeriveClasses(record.claims);
  return record;
}

RemoteKnowledgeGraph::RemoteKnowledgeGraph(
    RemoteOptions options, std::unique_ptr<HttpTransport> transport)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      in_flight_(std::clamp(options_.max_in_flight, 1, 64)) {
  if (options_.user_agent.empty()) {
    throw std::invalid_argument("remote backend requires a User-Agent");
  }
  if (options_.max_attempts < 1 || options_.max_in_flight < 1) {
    throw std::invalid_argument("attempts and in-flight cap must be >= 1");
  }
  if (!transport_) throw std::invalid_argument("transport is null");
}

json RemoteKnowledgeGraph::Call(
    const std::multimap<std::string, std::string> &params) {
  auto backoff = options_.initial_backoff;
  bool last_rate_limited = false;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    std::optional<std::chrono::milliseconds> wait;
    {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<64> &s;
        ~Release() { s.release(); }
      } release{in_flight_};
      ++requests_;
      try {
        HttpResponse res =
            transport_->Get(options_.base_url, params, options_.user_agent);
        last_rate_limited = res.status == 429;
        if (res.status == 200) {
          json body = json::parse(res.body, nullptr, false);
          if (body.is_discarded()) {
            last_error = "unparseable JSON response";
          } else if (const json *code = FindPath(body, {"error", "code"})) {
            // maxlag is the API's way of asking us to back off.
            last_rate_limited = *code == "maxlag";
            last_error = "API error " + code->dump();
            if (!last_rate_limited) throw BackendUnavailable(last_error);
          } else {
            return body;
          }
        } else if (res.status == 429 || res.status >= 500) {
          last_error = "HTTP " + std::to_string(res.status);
          wait = res.retry_after;
        } else {
          throw BackendUnavailable("HTTP " + std::to_string(res.status));
        }
      } catch (const TransportError &e) {
        last_rate_limited = false;
        last_error = e.what();
      }
    }
    if (attempt < options_.max_attempts) {
      std::this_thread::sleep_for(wait ? std::max(*wait, backoff) : backoff);
      backoff *= 2;
    }
  }
  if (last_rate_limited) throw RateLimited("rate limited: " + last_error);
  throw BackendUnavailable("backend unavailable: " + last_error);
}

std::vector<EntityRecord> RemoteKnowledgeGraph::FetchEntities(
    const std::vector<std::string> &ids) {
  std::vector<EntityRecord> records;
  for (size_t start = 0; start < ids.size(); start += kIdsPerRequest) {
    std::string joined;
    for (size_t i = start; i < std::min(ids.size(), start + kIdsPerRequest);
         ++i) {
      if (!joined.empty()) joined += '|';
      joined += ids[i];
    }
    json body = Call({{"action", "wbgetentities"},
                      {"ids", joined},
                      {"props", "claims|labels|aliases"},
                      {"languages", options_.language + "|mul"},
                      {"format", "json"}});
    const json *entities = FindPath(body, {"entities"});
    if (entities == nullptr || !entities->is_object()) continue;
    for (const auto &[key, entity] : entities->items()) {
      if (auto r = ParseWikidataEntity(entity, options_.language)) {
        records.push_back(std::move(*r));
      }
    }
  }
  ResolveReferenceLabels(records);
  return records;
}

void RemoteKnowledgeGraph::ResolveReferenceLabels(
    std::vector<EntityRecord> &records) {
  std::set<EntityId> wanted;
  for (const auto &r : records) {
    for (const auto &[prop, values] : r.claims) {
      for (const auto &v : values) {
        if (const auto *ref = std::get_if<EntityRef>(&v); ref && ref->label.empty()) {
          wanted.insert(ref->id);
        }
      }
    }
  }
  if (wanted.empty()) return;

  std::unordered_map<std::string, std::string> labels;
  std::vector<EntityId> ids(wanted.begin(), wanted.end());
  for (size_t start = 0; start < ids.size(); start += kIdsPerRequest) {
    std::string joined;
    for (size_t i = start; i < std::min(ids.size(), start + kIdsPerRequest);
         ++i) {
      if (!joined.empty()) joined += '|';
      joined += ids[i].str();
    }
    json body = Call({{"action", "wbgetentities"},
                      {"ids", joined},
                      {"props", "labels"},
                      {"languages", options_.language + "|mul"},
                      {"format", "json"}});
    const json *entities = FindPath(body, {"entities"});
    if (entities == nullptr || !entities->is_object()) continue;
    for (const auto &[key, entity] : entities->items()) {
      std::string label = LanguageValue(entity, "labels", options_.language);
      if (!label.empty()) labels[key] = NormalizeCell(label).text();
    }
  }
  for (auto &r : records) {
    for (auto &[prop, values] : r.claims) {
      for (auto &v : values) {
        if (auto *ref = std::get_if<EntityRef>(&v); ref && ref->label.empty()) {
          if (auto it = labels.find(ref->id.str()); it != labels.end()) {
            ref->label = it->second;
          }
        }
      }
    }
  }
}

CandidateSet RemoteKnowledgeGraph::DoSearch(std::string_view query, int limit) {
  json body = Call({{"action", "wbsearchentities"},
                    {"search", std::string(query)},
                    {"language", options_.language},
                    {"uselang", options_.language},
                    {"type", "item"},
                    {"limit", std::to_string(limit)},
                    {"format", "json"}});
  std::vector<std::string> ids;
  if (const json *hits = FindPath(body, {"search"}); hits && hits->is_array()) {
    for (const auto &hit : *hits) {
      const json *id = FindPath(hit, {"id"});
      if (id == nullptr || !id->is_string()) continue;
      std::string s = id->get<std::string>();
      if (EntityId::Parse(s) &&
          std::find(ids.begin(), ids.end(), s) == ids.end()) {
        ids.push_back(std::move(s));
      }
      if (ids.size() == static_cast<size_t>(limit)) break;
    }
  }

  CandidateSet result{std::string(query), {}};
  if (ids.empty()) return result;
  std::vector<EntityRecord> records = FetchEntities(ids);
  for (const auto &id : ids) {
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const EntityRecord &r) { return r.id.str() == id; });
    if (it != records.end()) result.candidates.push_back(std::move(*it));
  }
  return result;
}

EntityRecord RemoteKnowledgeGraph::DoGetEntity(const EntityId &id) {
  std::vector<EntityRecord> records = FetchEntities({id.str()});
  if (records.empty()) throw NotFound("entity " + id.str() + " not found");
  return std::move(records.front());
}

}  // namespace amalgam
