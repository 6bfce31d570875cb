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

// Persistent memoization of knowledge-graph lookups.
//
// On-disk layout: one JSON file per key at <dir>/<hh>/<hash16>.json, where
// hash16 is the FNV-1a-64 hash of the key in hex and hh its first two
// digits. Each file holds {"key", "stored_at", "payload"}; the stored key
// is compared on read, so a hash collision reads as a miss. Files are
// written to a temporary name and renamed into place, so a killed process
// leaves either the old entry or the new one. There is no expiry; purge
// the directory to pick up knowledge-graph changes.

#ifndef AMALGAM_LOOKUP_CACHE_H_
#define AMALGAM_LOOKUP_CACHE_H_

#include <array>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "amalgam/diagnostics.h"
#include "amalgam/kg.h"

namespace amalgam {

class LookupCache {
 public:
  // Creates `dir` if needed. Throws IoError if it cannot.
  explicit LookupCache(std::filesystem::path dir,
                       Diagnostics *diagnostics = nullptr);

  // Operation tag and normalized query joined by U+001F.
  static std::string MakeKey(std::string_view op, std::string_view query);

  // Absent on miss. A corrupt entry is removed and reported as a miss.
  std::optional<std::string> Get(std::string_view key);

  // Returns false (and records a warning) if the entry could not be written.
  bool Put(std::string_view key, std::string_view payload);

  // Removes every entry. Returns the number of files deleted.
  size_t Purge();

  const std::filesystem::path &dir() const { return dir_; }
  std::filesystem::path PathFor(std::string_view key) const;

 private:
  std::mutex &StripeFor(std::string_view key);

  std::filesystem::path dir_;
  Diagnostics *diagnostics_;
  std::array<std::mutex, 64> stripes_;
};

// Serves Search and GetEntity from the cache, filling it on miss. Empty
// searches and NotFound results are cached too; BackendUnavailable is not.
class CachingKnowledgeGraph : public KnowledgeGraph {
 public:
  CachingKnowledgeGraph(KnowledgeGraph &inner, LookupCache &cache)
      : inner_(inner), cache_(cache) {}

 protected:
  CandidateSet DoSearch(std::string_view query, int limit) override;
  EntityRecord DoGetEntity(const EntityId &id) override;

 private:
  KnowledgeGraph &inner_;
  LookupCache &cache_;
};

}  // namespace amalgam

#endif  // AMALGAM_LOOKUP_CACHE_H_
