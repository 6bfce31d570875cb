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

// End-to-end runs: load a corpus, annotate columns then cells, write the
// submission files and a manifest. Also snapshot building.

#ifndef AMALGAM_PIPELINE_H_
#define AMALGAM_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amalgam/cea.h"
#include "amalgam/cta.h"
#include "amalgam/diagnostics.h"
#include "amalgam/kg.h"
#include "json.hpp"

namespace amalgam {

enum class BackendKind { kSnapshot, kRemote };

struct RunConfig {
  std::filesystem::path tables_dir;
  std::optional<std::filesystem::path> targets_cta;
  std::optional<std::filesystem::path> targets_cea;
  BackendKind backend = BackendKind::kSnapshot;
  std::optional<std::filesystem::path> snapshot_path;
  std::string api_base_url = "https://www.wikidata.org/w/api.php";
  std::string user_agent;
  int limit = 10;
  int threshold = 90;
  int concurrency = 4;
  std::optional<std::filesystem::path> cache_dir;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> wordlist;
  bool verbose = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empty when the config is usable; otherwise one message per problem. With
// `backend_supplied` the backend settings are not checked.
std::vector<std::string> ValidateConfig(const RunConfig &cfg,
                                        bool backend_supplied = false);

// Applies a JSON config file whose keys match the long flag names
// ("tables", "snapshot", "concurrency", ...). Throws ConfigError on unknown
// keys or wrong types.
void ApplyConfigJson(RunConfig &cfg, const nlohmann::json &j);

// Applies AMALGAM_API_BASE_URL, AMALGAM_CACHE_DIR and AMALGAM_USER_AGENT.
using EnvLookup = std::function<const char *(const char *)>;
void ApplyEnvironment(RunConfig &cfg, const EnvLookup &getenv_fn);

nlohmann::json ToJson(const RunConfig &cfg);

// Target files. Throws IoError or MalformedRow.
std::vector<ColumnTarget> ReadColumnTargets(const std::filesystem::path &path);
std::vector<CellTarget> ReadCellTargets(const std::filesystem::path &path);

// Submission CSVs, every field quoted, one annotation per line.
std::string FormatCta(const std::vector<ColumnAnnotation> &rows);
std::string FormatCea(const std::vector<CellAnnotation> &rows);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> errors;  // Why a run exited non-zero.
  size_t tables_loaded = 0;
  size_t tables_skipped = 0;
  std::vector<ColumnAnnotation> cta;
  std::vector<CellAnnotation> cea;
  uint64_t backend_searches = 0;
  uint64_t backend_fetches = 0;
  nlohmann::json manifest;
};

// Annotates with the backend described by `cfg`. Exit codes: 0 success,
// 1 configuration error, 2 unreadable corpus or target file.
RunResult RunAnnotate(const RunConfig &cfg, Diagnostics &diagnostics);

// Same, on a caller-supplied backend (the config's backend settings are
// ignored, caching still applies).
RunResult RunAnnotateWith(const RunConfig &cfg, KnowledgeGraph &backend,
                          Diagnostics &diagnostics);

struct SnapshotFetchResult {
  int exit_code = 0;
  size_t records = 0;
  std::vector<std::string> failures;  // "label: reason"
};

// Looks up each label (one per line) and writes the candidates' records as a
// snapshot, sorted by id. Failures go to `<out>.failures.txt`. Exit codes:
// 0 at least one record written, 1 empty label file, 3 backend unreachable
// (nothing written), 4 nothing found.
SnapshotFetchResult FetchSnapshot(const std::filesystem::path &labels_file,
                                  const std::filesystem::path &out,
                                  KnowledgeGraph &kg, int limit);

}  // namespace amalgam

#endif  // AMALGAM_PIPELINE_H_
