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

#include "amalgam/lookup_cache.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "amalgam/errors.h"
#include "amalgam/snapshot.h"

namespace amalgam {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

uint64_t Fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string UtcNow() {
  std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

LookupCache::LookupCache(fs::path dir, Diagnostics *diagnostics)
    : dir_(std::move(dir)), diagnostics_(diagnostics) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw IoError("cannot create cache directory " + dir_.string());
  }
}

std::string LookupCache::MakeKey(std::string_view op, std::string_view query) {
  std::string key(op);
  key += '\x1f';
  key += query;
  return key;
}

fs::path LookupCache::PathFor(std::string_view key) const {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(key)));
  return dir_ / std::string(hex, 2) / (std::string(hex) + ".json");
}

std::mutex &LookupCache::StripeFor(std::string_view key) {
  return stripes_[Fnv1a64(key) % stripes_.size()];
}

std::optional<std::string> LookupCache::Get(std::string_view key) {
  const fs::path path = PathFor(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  in.close();

  json entry = json::parse(buf.str(), nullptr, false);
  bool valid = !entry.is_discarded() && entry.is_object() &&
               entry.contains("key") && entry["key"].is_string() &&
               entry.contains("payload") && entry["payload"].is_string();
  if (!valid) {
    std::lock_guard<std::mutex> lock(StripeFor(key));
    std::error_code ignored;
    fs::remove(path, ignored);
    if (diagnostics_ != nullptr) {
      diagnostics_->Warn(Warning::kCacheCorrupt, path.string());
    }
    return std::nullopt;
  }
  if (entry["key"].get<std::string>() != key) return std::nullopt;
  return entry["payload"].get<std::string>();
}

bool LookupCache::Put(std::string_view key, std::string_view payload) {
  const fs::path path = PathFor(key);
  json entry = {{"key", std::string(key)},
                {"stored_at", UtcNow()},
                {"payload", std::string(payload)}};
  std::lock_guard<std::mutex> lock(StripeFor(key));
  try {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    WriteFileAtomic(path, entry.dump());
    return true;
  } catch (const std::exception &e) {
    if (diagnostics_ != nullptr) {
      diagnostics_->Warn(Warning::kCacheWriteFailed, e.what());
    }
    return false;
  }
}

size_t LookupCache::Purge() {
  size_t removed = 0;
  std::error_code ec;
  for (const auto &shard : fs::directory_iterator(dir_, ec)) {
    if (!shard.is_directory()) continue;
    for (const auto &file : fs::directory_iterator(shard.path(), ec)) {
      if (fs::remove(file.path(), ec)) ++removed;
    }
    fs::remove(shard.path(), ec);
  }
  return removed;
}

CandidateSet CachingKnowledgeGraph::DoSearch(std::string_view query, int limit) {
  const std::string key =
      LookupCache::MakeKey("search/" + std::to_string(limit), query);
  if (auto payload = cache_.Get(key)) {
    try {
      return CandidateSetFromJson(json::parse(*payload));
    } catch (const std::exception &) {
      // Undecodable payload: fall through and refetch.
    }
  }
  CandidateSet result = inner_.Search(query, limit);
  cache_.Put(key, ToJson(result).dump());
  return result;
}

EntityRecord CachingKnowledgeGraph::DoGetEntity(const EntityId &id) {
  const std::string key = LookupCache::MakeKey("entity", id.str());
  if (auto payload = cache_.Get(key)) {
    try {
      json j = json::parse(*payload);
      if (j.is_object() && j.value("not_found", false)) {
        throw NotFound("entity " + id.str() + " not found");
      }
      return EntityRecordFromJson(j);
    } catch (const NotFound &) {
      throw;
    } catch (const std::exception &) {
    }
  }
  try {
    EntityRecord record = inner_.GetEntity(id);
    cache_.Put(key, ToJson(record).dump());
    return record;
  } catch (const NotFound &) {
    cache_.Put(key, json{{"not_found", true}}.dump());
    throw;
  }
}

}  // namespace amalgam
