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

#include "amalgam/snapshot.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "amalgam/errors.h"
#include "amalgam/table.h"
#include "amalgam/text.h"

namespace amalgam {

namespace fs = std::filesystem;

SnapshotKnowledgeGraph::SnapshotKnowledgeGraph(std::vector<EntityRecord> records)
    : records_(std::move(records)) {
  for (size_t i = 0; i < records_.size(); ++i) {
    const EntityRecord &r = records_[i];
    if (!by_id_.emplace(r.id.str(), i).second) {
      throw std::invalid_argument("duplicate entity " + r.id.str());
    }
    by_term_[FoldedKey(r.label)].push_back({0, i});
    for (const auto &alias : r.aliases) {
      by_term_[FoldedKey(alias)].push_back({1, i});
    }
  }
}

SnapshotKnowledgeGraph SnapshotKnowledgeGraph::Load(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  std::vector<EntityRecord> records;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (NormalizeCell(line).missing()) continue;
    auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    try {
      records.push_back(EntityRecordFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      throw SnapshotFormatError(where + e.what());
    } catch (const SnapshotFormatError &e) {
      throw SnapshotFormatError(where + e.what());
    }
    if (!seen.insert(records.back().id.str()).second) {
      throw SnapshotFormatError(where + "duplicate entity " +
                                records.back().id.str());
    }
  }
  if (in.bad()) throw IoError("cannot read snapshot " + path.string());
  return SnapshotKnowledgeGraph(std::move(records));
}

std::vector<std::string> SnapshotKnowledgeGraph::Terms() const {
  std::vector<std::string> terms;
  std::set<std::string> seen;
  for (const auto &r : records_) {
    if (seen.insert(r.label).second) terms.push_back(r.label);
    for (const auto &a : r.aliases) {
      if (seen.insert(a).second) terms.push_back(a);
    }
  }
  return terms;
}

CandidateSet SnapshotKnowledgeGraph::DoSearch(std::string_view query,
                                              int limit) {
  CandidateSet result{std::string(query), {}};
  auto it = by_term_.find(FoldedKey(query));
  if (it == by_term_.end()) return result;

  // Best relevance per entity.
  std::vector<Hit> hits;
  for (const Hit &h : it->second) {
    auto same = std::find_if(hits.begin(), hits.end(),
                             [&](const Hit &o) { return o.index == h.index; });
    if (same == hits.end()) {
      hits.push_back(h);
    } else {
      same->relevance = std::min(same->relevance, h.relevance);
    }
  }
  std::sort(hits.begin(), hits.end(), [&](const Hit &a, const Hit &b) {
    if (a.relevance != b.relevance) return a.relevance < b.relevance;
    return records_[a.index].id < records_[b.index].id;
  });
  if (hits.size() > static_cast<size_t>(limit)) hits.resize(limit);
  for (const Hit &h : hits) result.candidates.push_back(records_[h.index]);
  return result;
}

EntityRecord SnapshotKnowledgeGraph::DoGetEntity(const EntityId &id) {
  auto it = by_id_.find(id.str());
  if (it == by_id_.end()) throw NotFound("entity " + id.str() + " not found");
  return records_[it->second];
}

void WriteFileAtomic(const fs::path &path, std::string_view contents) {
  static std::atomic<uint64_t> counter{0};
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

void WriteSnapshot(const fs::path &path,
                   const std::vector<EntityRecord> &records) {
  std::ostringstream out;
  for (const auto &r : records) out << ToJson(r).dump() << '\n';
  WriteFileAtomic(path, out.str());
}

}  // namespace amalgam
