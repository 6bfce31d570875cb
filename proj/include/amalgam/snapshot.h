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

#ifndef AMALGAM_SNAPSHOT_H_
#define AMALGAM_SNAPSHOT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amalgam/kg.h"

namespace amalgam {

// Read-only knowledge graph loaded from a JSON-Lines snapshot, one
// EntityRecord per line. Search is a case-insensitive exact match on label
// or alias; label matches rank before alias-only matches, then ids ascend
// numerically. This is deliberately stricter than the Wikidata search API.
class SnapshotKnowledgeGraph : public KnowledgeGraph {
 public:
  explicit SnapshotKnowledgeGraph(std::vector<EntityRecord> records);

  // Throws IoError or SnapshotFormatError (with the line number).
  static SnapshotKnowledgeGraph Load(const std::filesystem::path &path);

  size_t size() const { return records_.size(); }
  const std::vector<EntityRecord> &records() const { return records_; }

  // Every label and alias, deduplicated, in record order.
  std::vector<std::string> Terms() const;

 protected:
  CandidateSet DoSearch(std::string_view query, int limit) override;
  EntityRecord DoGetEntity(const EntityId &id) override;

 private:
  struct Hit {
    int relevance;  // 0 = label, 1 = alias.
    size_t index;
  };

  std::vector<EntityRecord> records_;
  std::unordered_map<std::string, size_t> by_id_;
  std::unordered_map<std::string, std::vector<Hit>> by_term_;
};

// Writes records as JSON Lines through a temporary file and rename.
void WriteSnapshot(const std::filesystem::path &path,
                   const std::vector<EntityRecord> &records);

// Writes `contents` to `path` atomically. Throws IoError.
void WriteFileAtomic(const std::filesystem::path &path,
                     std::string_view contents);

}  // namespace amalgam

#endif  // AMALGAM_SNAPSHOT_H_
