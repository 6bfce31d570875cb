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

// Knowledge-graph records and the lookup interface shared by the snapshot
// store, the remote Wikidata client and the caching/counting decorators.

#ifndef AMALGAM_KG_H_
#define AMALGAM_KG_H_

#include <atomic>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace amalgam {

// Wikidata item identifier, "Q" followed by decimal digits.
class EntityId {
 public:
  static std::optional<EntityId> Parse(std::string_view text);

  // Throws std::invalid_argument when `text` is not an item id.
  explicit EntityId(std::string_view text);

  const std::string &str() const { return id_; }
  uint64_t number() const { return number_; }
  std::string Iri() const { return "http://www.wikidata.org/entity/" + id_; }

  bool operator==(const EntityId &other) const { return id_ == other.id_; }
  // Orders by numeric part, so Q9 < Q70.
  std::strong_ordering operator<=>(const EntityId &other) const {
    if (auto c = number_ <=> other.number_; c != 0) return c;
    return id_ <=> other.id_;
  }

 private:
  EntityId() = default;
  std::string id_;
  uint64_t number_ = 0;
};

bool IsPropertyId(std::string_view text);

struct EntityRef {
  EntityId id;
  std::string label;  // May be empty when unresolved.
  bool operator==(const EntityRef &) const = default;
};

struct Literal {
  std::string text;
  bool operator==(const Literal &) const = default;
};

struct Quantity {
  double amount = 0;
  bool operator==(const Quantity &) const = default;
};

using ClaimValue = std::variant<EntityRef, Literal, Quantity>;

// Throws std::invalid_argument for a non-finite amount.
ClaimValue MakeQuantity(double amount);

// Properties whose entity objects define an entity's classes.
inline constexpr std::string_view kClassProperties[] = {"P31", "P279", "P361"};

struct EntityRecord {
  EntityId id{"Q0"};
  std::string label;
  std::vector<std::string> aliases;
  std::vector<EntityId> classes;
  std::map<std::string, std::vector<ClaimValue>> claims;

  bool operator==(const EntityRecord &) const = default;
};

// Union of P31, P279 then P361 entity objects, in claim order, deduplicated.
std::vector<EntityId> DeriveClasses(
    const std::map<std::string, std::vector<ClaimValue>> &claims);

struct CandidateSet {
  std::string query;
  std::vector<EntityRecord> candidates;

  bool operator==(const CandidateSet &) const = default;
};

// JSON forms used by the snapshot file and the lookup cache. FromJson
// throws SnapshotFormatError on schema violations.
nlohmann::json ToJson(const EntityRecord &record);
EntityRecord EntityRecordFromJson(const nlohmann::json &j);
nlohmann::json ToJson(const CandidateSet &set);
CandidateSet CandidateSetFromJson(const nlohmann::json &j);

// Lookup interface. Implementations must be safe for concurrent calls.
class KnowledgeGraph {
 public:
  static constexpr int kMaxLimit = 50;

  virtual ~KnowledgeGraph() = default;

  // Entities whose label or alias matches `query`, at most `limit` of them,
  // each with classes and claims populated. Throws std::invalid_argument for
  // an empty query or a limit outside [1, 50]; BackendUnavailable when the
  // backend cannot be reached.
  CandidateSet Search(std::string_view query, int limit);

  // Throws NotFound or BackendUnavailable.
  EntityRecord GetEntity(const EntityId &id) { return DoGetEntity(id); }

  std::vector<EntityId> GetClasses(const EntityId &id) {
    return GetEntity(id).classes;
  }

 protected:
  virtual CandidateSet DoSearch(std::string_view query, int limit) = 0;
  virtual EntityRecord DoGetEntity(const EntityId &id) = 0;
};

// Counts calls that reach the wrapped backend.
class CountingKnowledgeGraph : public KnowledgeGraph {
 public:
  explicit CountingKnowledgeGraph(KnowledgeGraph &inner) : inner_(inner) {}

  uint64_t searches() const { return searches_.load(); }
  uint64_t fetches() const { return fetches_.load(); }
  uint64_t calls() const { return searches() + fetches(); }

 protected:
  CandidateSet DoSearch(std::string_view query, int limit) override {
    ++searches_;
    return inner_.Search(query, limit);
  }
  EntityRecord DoGetEntity(const EntityId &id) override {
    ++fetches_;
    return inner_.GetEntity(id);
  }

 private:
  KnowledgeGraph &inner_;
  std::atomic<uint64_t> searches_{0};
  std::atomic<uint64_t> fetches_{0};
};

}  // namespace amalgam

#endif  // AMALGAM_KG_H_
