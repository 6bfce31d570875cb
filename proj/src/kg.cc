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

#include "amalgam/kg.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "amalgam/errors.h"
#include "amalgam/table.h"

namespace amalgam {

using nlohmann::json;

namespace {

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return c >= '0' && c <= '9'; });
}

std::string RequireString(const json &j, const char *field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw SnapshotFormatError(std::string("missing string field '") + field +
                              "'");
  }
  return it->get<std::string>();
}

EntityId RequireEntityId(const std::string &text) {
  auto id = EntityId::Parse(text);
  if (!id) throw SnapshotFormatError("bad entity id '" + text + "'");
  return *id;
}

json ClaimToJson(const ClaimValue &value) {
  return std::visit(
      [](const auto &v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EntityRef>) {
          return {{"kind", "entity"}, {"id", v.id.str()}, {"label", v.label}};
        } else if constexpr (std::is_same_v<T, Literal>) {
          return {{"kind", "literal"}, {"text", v.text}};
        } else {
          return {{"kind", "quantity"}, {"amount", v.amount}};
        }
      },
      value);
}

ClaimValue ClaimFromJson(const json &j) {
  if (!j.is_object()) throw SnapshotFormatError("claim is not an object");
  const std::string kind = RequireString(j, "kind");
  if (kind == "entity") {
    std::string label;
    if (auto it = j.find("label"); it != j.end() && it->is_string()) {
      label = it->get<std::string>();
    }
    return EntityRef{RequireEntityId(RequireString(j, "id")), label};
  }
  if (kind == "literal") return Literal{RequireString(j, "text")};
  if (kind == "quantity") {
    auto it = j.find("amount");
    if (it == j.end() || !it->is_number()) {
      throw SnapshotFormatError("quantity claim without numeric amount");
    }
    double amount = it->get<double>();
    if (!std::isfinite(amount)) {
      throw SnapshotFormatError("quantity amount is not finite");
    }
    return Quantity{amount};
  }
  throw SnapshotFormatError("unknown claim kind '" + kind + "'");
}

}  // namespace

std::optional<EntityId> EntityId::Parse(std::string_view text) {
  if (text.size() < 2 || text.size() > 20 || text[0] != 'Q' ||
      !AllDigits(text.substr(1))) {
    return std::nullopt;
  }
  EntityId id;
  id.id_ = std::string(text);
  id.number_ = std::stoull(std::string(text.substr(1)));
  return id;
}

EntityId::EntityId(std::string_view text) {
  auto parsed = Parse(text);
  if (!parsed) {
    throw std::invalid_argument("not an entity id: '" + std::string(text) +
                                "'");
  }
  *this = std::move(*parsed);
}

bool IsPropertyId(std::string_view text) {
  return text.size() >= 2 && text[0] == 'P' && AllDigits(text.substr(1));
}

ClaimValue MakeQuantity(double amount) {
  if (!std::isfinite(amount)) {
    throw std::invalid_argument("quantity amount must be finite");
  }
  return Quantity{amount};
}

std::vector<EntityId> DeriveClasses(
    const std::map<std::string, std::vector<ClaimValue>> &claims) {
  std::vector<EntityId> classes;
  for (std::string_view prop : kClassProperties) {
    auto it = claims.find(std::string(prop));
    if (it == claims.end()) continue;
    for (const ClaimValue &v : it->second) {
      const auto *ref = std::get_if<EntityRef>(&v);
      if (ref == nullptr) continue;
      if (std::find(classes.begin(), classes.end(), ref->id) == classes.end()) {
        classes.push_back(ref->id);
      }
    }
  }
  return classes;
}

json ToJson(const EntityRecord &record) {
  json classes = json::array();
  for (const auto &c : record.classes) classes.push_back(c.str());
  json claims = json::object();
  for (const auto &[prop, values] : record.claims) {
    json arr = json::array();
    for (const auto &v : values) arr.push_back(ClaimToJson(v));
    claims[prop] = std::move(arr);
  }
  return {{"id", record.id.str()},
          {"label", record.label},
          {"aliases", record.aliases},
          {"classes", std::move(classes)},
          {"claims", std::move(claims)}};
}

EntityRecord EntityRecordFromJson(const json &j) {
  if (!j.is_object()) throw SnapshotFormatError("record is not an object");
  EntityRecord record;
  record.id = RequireEntityId(RequireString(j, "id"));
  record.label = NormalizeCell(RequireString(j, "label")).text();
  if (record.label.empty()) {
    throw SnapshotFormatError("record " + record.id.str() + " has no label");
  }
  if (auto it = j.find("aliases"); it != j.end()) {
    if (!it->is_array()) throw SnapshotFormatError("aliases is not an array");
    for (const auto &a : *it) {
      if (!a.is_string()) throw SnapshotFormatError("alias is not a string");
      std::string alias = NormalizeCell(a.get<std::string>()).text();
      if (!alias.empty()) record.aliases.push_back(std::move(alias));
    }
  }
  if (auto it = j.find("claims"); it != j.end()) {
    if (!it->is_object()) throw SnapshotFormatError("claims is not an object");
    for (const auto &[prop, values] : it->items()) {
      if (!IsPropertyId(prop)) {
        throw SnapshotFormatError("bad property id '" + prop + "'");
      }
      if (!values.is_array()) {
        throw SnapshotFormatError("claims of " + prop + " is not an array");
      }
      auto &out = record.claims[prop];
      for (const auto &v : values) out.push_back(ClaimFromJson(v));
    }
  }

  record.classes = DeriveClasses(record.claims);
  if (auto it = j.find("classes"); it != j.end()) {
    if (!it->is_array()) throw SnapshotFormatError("classes is not an array");
    std::vector<EntityId> listed;
    for (const auto &c : *it) {
      if (!c.is_string()) throw SnapshotFormatError("class is not a string");
      listed.push_back(RequireEntityId(c.get<std::string>()));
    }
    if (record.classes.empty() && !listed.empty()) {
      // Class-only records get matching P31 claims, keeping classes equal to
      // the union of the class properties.
      auto &p31 = record.claims["P31"];
      for (const auto &c : listed) p31.push_back(EntityRef{c, ""});
      record.classes = DeriveClasses(record.claims);
    }
    if (listed != record.classes) {
      throw SnapshotFormatError("record " + record.id.str() +
                                ": classes disagree with P31/P279/P361 claims");
    }
  }
  return record;
}

json ToJson(const CandidateSet &set) {
  json arr = json::array();
  for (const auto &c : set.candidates) arr.push_back(ToJson(c));
  return {{"query", set.query}, {"candidates", std::move(arr)}};
}

CandidateSet CandidateSetFromJson(const json &j) {
  if (!j.is_object()) throw SnapshotFormatError("candidate set is not an object");
  CandidateSet set;
  set.query = RequireString(j, "query");
  auto it = j.find("candidates");
  if (it == j.end() || !it->is_array()) {
    throw SnapshotFormatError("candidate set without candidates array");
  }
  for (const auto &c : *it) set.candidates.push_back(EntityRecordFromJson(c));
  return set;
}

CandidateSet KnowledgeGraph::Search(std::string_view query, int limit) {
  if (limit < 1 || limit > kMaxLimit) {
    throw std::invalid_argument("search limit must be in [1, 50]");
  }
  std::string normalized = NormalizeCell(query).text();
  if (normalized.empty()) {
    throw std::invalid_argument("search query must be non-empty");
  }
  return DoSearch(normalized, limit);
}

}  // namespace amalgam
