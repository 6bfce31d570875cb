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

#include "amalgam/pipeline.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "amalgam/errors.h"
#include "amalgam/kernels.h"
#include "amalgam/lookup_cache.h"
#include "amalgam/remote.h"
#include "amalgam/snapshot.h"
#include "amalgam/spellcheck.h"
#include "amalgam/table.h"

namespace amalgam {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
T Get(const json &j, const std::string &key) {
  try {
    return j.get<T>();
  } catch (const json::exception &) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

size_t RequireIndex(const CsvRecord &rec, size_t i, const fs::path &path) {
  const std::string s = NormalizeCell(rec.fields[i]).text();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw MalformedRow(path.string(), rec.line,
                       "non-numeric index '" + rec.fields[i] + "'");
  }
  return std::stoull(s);
}

struct LoadedCorpus {
  std::vector<Table> tables;
  std::map<std::string, const Table *> by_id;
  size_t skipped = 0;
};

LoadedCorpus LoadCorpus(const fs::path &dir, int threads,
                        Diagnostics &diagnostics) {
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::optional<Table>> slots(files.size());
  const auto count = static_cast<std::ptrdiff_t>(files.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const fs::path &path = files[static_cast<size_t>(i)];
    try {
      slots[static_cast<size_t>(i)].emplace(LoadTable(path));
    } catch (const EmptyTable &e) {
      diagnostics.Warn(Warning::kEmptyTable, e.what());
    } catch (const std::exception &e) {
      diagnostics.Warn(Warning::kUnreadableTable,
                       path.string() + ": " + e.what());
    }
  }

  LoadedCorpus corpus;
  for (auto &slot : slots) {
    if (slot) {
      corpus.tables.push_back(std::move(*slot));
    } else {
      ++corpus.skipped;
    }
  }
  for (const Table &t : corpus.tables) corpus.by_id.emplace(t.id(), &t);
  return corpus;
}

TermDictionary BuildDictionary(const RunConfig &cfg,
                               const SnapshotKnowledgeGraph *snapshot) {
  TermDictionary dict;
  if (snapshot != nullptr) {
    for (const auto &t : snapshot->Terms()) dict.Add(t);
  } else if (cfg.snapshot_path && fs::exists(*cfg.snapshot_path)) {
    for (const auto &t : SnapshotKnowledgeGraph::Load(*cfg.snapshot_path).Terms()) {
      dict.Add(t);
    }
  }
  if (cfg.wordlist) dict.AddWordList(*cfg.wordlist);
  return dict;
}

RunResult Annotate(const RunConfig &cfg, KnowledgeGraph &base,
                   const SnapshotKnowledgeGraph *snapshot,
                   Diagnostics &diagnostics) {
  RunResult result;
  const auto start = Clock::now();
  json timing = json::object();

  if (!fs::is_directory(cfg.tables_dir)) {
    result.errors.push_back("tables directory " + cfg.tables_dir.string() +
                            " is not readable");
    result.exit_code = 2;
    return result;
  }

  std::vector<ColumnTarget> cta_targets;
  std::vector<CellTarget> cea_targets;
  LoadedCorpus corpus;
  try {
    if (cfg.targets_cta) cta_targets = ReadColumnTargets(*cfg.targets_cta);
    if (cfg.targets_cea) cea_targets = ReadCellTargets(*cfg.targets_cea);
    corpus = LoadCorpus(cfg.tables_dir, cfg.concurrency, diagnostics);
  } catch (const std::exception &e) {
    result.errors.push_back(e.what());
    result.exit_code = 2;
    return result;
  }
  result.tables_loaded = corpus.tables.size();
  result.tables_skipped = corpus.skipped;
  timing["load"] = SecondsSince(start);

  TermDictionary dictionary;
  try {
    dictionary = BuildDictionary(cfg, snapshot);
  } catch (const std::exception &e) {
    throw ConfigError(std::string("cannot build spelling dictionary: ") +
                      e.what());
  }
  SpellOptions spell_options;
  spell_options.threshold = cfg.threshold;
  spell_options.kg_suggestions = cfg.limit;
  SpellChecker spell(std::move(dictionary), spell_options);

  CountingKnowledgeGraph counted(base);
  std::unique_ptr<LookupCache> cache;
  std::unique_ptr<CachingKnowledgeGraph> cached;
  KnowledgeGraph *kg = &counted;
  if (cfg.cache_dir) {
    cache = std::make_unique<LookupCache>(*cfg.cache_dir, &diagnostics);
    cached = std::make_unique<CachingKnowledgeGraph>(counted, *cache);
    kg = cached.get();
  }
  AnnotationContext ctx{*kg, spell, diagnostics, cfg.limit};

  // Column types first: cell linking filters by them.
  auto phase = Clock::now();
  std::set<ColumnTarget> unique_cols(cta_targets.begin(), cta_targets.end());
  std::vector<ColumnTask> column_tasks;
  for (const ColumnTarget &t : unique_cols) {
    auto it = corpus.by_id.find(t.table_id);
    if (it == corpus.by_id.end()) {
      diagnostics.Warn(Warning::kUnknownTable, "CTA target table " + t.table_id);
      continue;
    }
    if (t.col >= it->second->cols()) {
      diagnostics.Warn(Warning::kUnknownColumn,
                       t.table_id + " column " + std::to_string(t.col));
      continue;
    }
    column_tasks.push_back({it->second, t.col});
  }
  std::map<std::string, ColumnClasses> classes;
  for (auto &a : AnnotateColumnsParallel(column_tasks, ctx, cfg.concurrency)) {
    if (!a) continue;
    classes[a->table_id].emplace(a->col, a->class_id);
    result.cta.push_back(std::move(*a));
  }
  timing["cta"] = SecondsSince(phase);

  phase = Clock::now();
  std::map<std::string, std::vector<CellTarget>> cea_by_table;
  for (const CellTarget &t : cea_targets) {
    if (!corpus.by_id.count(t.table_id)) {
      diagnostics.Warn(Warning::kUnknownTable, "CEA target table " + t.table_id);
      continue;
    }
    cea_by_table[t.table_id].push_back(t);
  }
  static const ColumnClasses kNone;
  std::vector<RowTask> row_tasks;
  for (const auto &[table_id, targets] : cea_by_table) {
    const Table *table = corpus.by_id.at(table_id);
    auto cls = classes.find(table_id);
    const ColumnClasses *table_classes =
        cls == classes.end() ? &kNone : &cls->second;
    for (auto &[row, cols] : GroupTargetsByRow(*table, targets, diagnostics)) {
      row_tasks.push_back({table, row, std::move(cols), table_classes});
    }
  }
  for (auto &row : AnnotateRowsParallel(row_tasks, ctx, cfg.concurrency)) {
    std::move(row.begin(), row.end(), std::back_inserter(result.cea));
  }
  timing["cea"] = SecondsSince(phase);

  // Tasks are already in (table, col) / (table, row, col) order; sort anyway
  // so the files never depend on how the work was split.
  std::sort(result.cta.begin(), result.cta.end(),
            [](const ColumnAnnotation &a, const ColumnAnnotation &b) {
              return std::tie(a.table_id, a.col) < std::tie(b.table_id, b.col);
            });
  std::sort(result.cea.begin(), result.cea.end(),
            [](const CellAnnotation &a, const CellAnnotation &b) {
              return std::tie(a.table_id, a.row, a.col) <
                     std::tie(b.table_id, b.row, b.col);
            });

  result.backend_searches = counted.searches();
  result.backend_fetches = counted.fetches();

  try {
    fs::create_directories(cfg.out_dir);
    if (cfg.targets_cta) WriteFileAtomic(cfg.out_dir / "cta.csv", FormatCta(result.cta));
    if (cfg.targets_cea) WriteFileAtomic(cfg.out_dir / "cea.csv", FormatCea(result.cea));
  } catch (const std::exception &e) {
    throw ConfigError(std::string("cannot write outputs: ") + e.what());
  }
  timing["total"] = SecondsSince(start);

  json methods = json::object();
  for (const auto &a : result.cea) {
    methods[std::string(LinkMethodName(a.method))] =
        methods.value(std::string(LinkMethodName(a.method)), 0) + 1;
  }
  result.manifest = {
      {"config", ToJson(cfg)},
      {"tables", {{"loaded", result.tables_loaded},
                  {"skipped", result.tables_skipped}}},
      {"targets", {{"cta", cta_targets.size()}, {"cea", cea_targets.size()}}},
      {"annotations", {{"cta", result.cta.size()},
                       {"cea", result.cea.size()},
                       {"cea_methods", methods}}},
      {"backend_calls", {{"search", result.backend_searches},
                         {"get_entity", result.backend_fetches}}},
      {"warnings", diagnostics.Totals()},
      {"warning_total", diagnostics.total()},
      {"warning_messages", diagnostics.messages()},
      {"timing_seconds", timing}};
  try {
    WriteFileAtomic(cfg.out_dir / "manifest.json", result.manifest.dump(2) + "\n");
  } catch (const std::exception &e) {
    throw ConfigError(std::string("cannot write manifest: ") + e.what());
  }
  return result;
}

}  // namespace

std::vector<std::string> ValidateConfig(const RunConfig &cfg,
                                        bool backend_supplied) {
  std::vector<std::string> errors;
  if (cfg.tables_dir.empty()) errors.push_back("--tables is required");
  if (!cfg.targets_cta && !cfg.targets_cea) {
    errors.push_back("at least one of --cta-targets / --cea-targets is required");
  }
  if (!backend_supplied && cfg.backend == BackendKind::kSnapshot &&
      !cfg.snapshot_path) {
    errors.push_back("--backend snapshot requires --snapshot");
  }
  if (!backend_supplied && cfg.backend == BackendKind::kRemote &&
      cfg.user_agent.empty()) {
    errors.push_back("--backend remote requires --user-agent");
  }
  if (cfg.threshold < 0 || cfg.threshold > 100) {
    errors.push_back("--threshold must be in [0, 100]");
  }
  if (cfg.concurrency < 1) errors.push_back("--concurrency must be >= 1");
  if (cfg.limit < 1 || cfg.limit > KnowledgeGraph::kMaxLimit) {
    errors.push_back("--limit must be in [1, 50]");
  }
  return errors;
}

void ApplyConfigJson(RunConfig &cfg, const json &j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (key == "tables") {
      cfg.tables_dir = Get<std::string>(value, key);
    } else if (key == "cta-targets") {
      cfg.targets_cta = Get<std::string>(value, key);
    } else if (key == "cea-targets") {
      cfg.targets_cea = Get<std::string>(value, key);
    } else if (key == "backend") {
      std::string b = Get<std::string>(value, key);
      if (b == "snapshot") {
        cfg.backend = BackendKind::kSnapshot;
      } else if (b == "remote") {
        cfg.backend = BackendKind::kRemote;
      } else {
        throw ConfigError("unknown backend '" + b + "'");
      }
    } else if (key == "snapshot") {
      cfg.snapshot_path = Get<std::string>(value, key);
    } else if (key == "api-base-url") {
      cfg.api_base_url = Get<std::string>(value, key);
    } else if (key == "user-agent") {
      cfg.user_agent = Get<std::string>(value, key);
    } else if (key == "limit") {
      cfg.limit = Get<int>(value, key);
    } else if (key == "threshold") {
      cfg.threshold = Get<int>(value, key);
    } else if (key == "concurrency") {
      cfg.concurrency = Get<int>(value, key);
    } else if (key == "cache-dir") {
      cfg.cache_dir = Get<std::string>(value, key);
    } else if (key == "out") {
      cfg.out_dir = Get<std::string>(value, key);
    } else if (key == "wordlist") {
      cfg.wordlist = Get<std::string>(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

void ApplyEnvironment(RunConfig &cfg, const EnvLookup &getenv_fn) {
  if (const char *v = getenv_fn("AMALGAM_API_BASE_URL"); v && *v) {
    cfg.api_base_url = v;
  }
  if (const char *v = getenv_fn("AMALGAM_CACHE_DIR"); v && *v) cfg.cache_dir = v;
  if (const char *v = getenv_fn("AMALGAM_USER_AGENT"); v && *v) cfg.user_agent = v;
}

json ToJson(const RunConfig &cfg) {
  auto opt = [](const std::optional<fs::path> &p) -> json {
    return p ? json(p->string()) : json(nullptr);
  };
  return {{"tables", cfg.tables_dir.string()},
          {"cta-targets", opt(cfg.targets_cta)},
          {"cea-targets", opt(cfg.targets_cea)},
          {"backend", cfg.backend == BackendKind::kSnapshot ? "snapshot" : "remote"},
          {"snapshot", opt(cfg.snapshot_path)},
          {"api-base-url", cfg.api_base_url},
          {"user-agent", cfg.user_agent},
          {"limit", cfg.limit},
          {"threshold", cfg.threshold},
          {"concurrency", cfg.concurrency},
          {"cache-dir", opt(cfg.cache_dir)},
          {"out", cfg.out_dir.string()},
          {"wordlist", opt(cfg.wordlist)}};
}

std::vector<ColumnTarget> ReadColumnTargets(const fs::path &path) {
  std::vector<ColumnTarget> out;
  for (const CsvRecord &rec : ParseCsvWithLines(ReadFile(path))) {
    if (rec.fields.size() < 2) {
      throw MalformedRow(path.string(), rec.line, "expected table,col");
    }
    std::string table = NormalizeCell(rec.fields[0]).text();
    if (table.empty()) throw MalformedRow(path.string(), rec.line, "empty table id");
    out.push_back({std::move(table), RequireIndex(rec, 1, path)});
  }
  return out;
}

std::vector<CellTarget> ReadCellTargets(const fs::path &path) {
  std::vector<CellTarget> out;
  for (const CsvRecord &rec : ParseCsvWithLines(ReadFile(path))) {
    if (rec.fields.size() < 3) {
      throw MalformedRow(path.string(), rec.line, "expected table,row,col");
    }
    std::string table = NormalizeCell(rec.fields[0]).text();
    if (table.empty()) throw MalformedRow(path.string(), rec.line, "empty table id");
    out.push_back({std::move(table), RequireIndex(rec, 1, path),
                   RequireIndex(rec, 2, path)});
  }
  return out;
}

std::string FormatCta(const std::vector<ColumnAnnotation> &rows) {
  std::string out;
  for (const auto &a : rows) {
    out += QuoteCsv(a.table_id) + "," + QuoteCsv(std::to_string(a.col)) + "," +
           QuoteCsv(a.class_id.Iri()) + "\n";
  }
  return out;
}

std::string FormatCea(const std::vector<CellAnnotation> &rows) {
  std::string out;
  for (const auto &a : rows) {
    out += QuoteCsv(a.table_id) + "," + QuoteCsv(std::to_string(a.row)) + "," +
           QuoteCsv(std::to_string(a.col)) + "," + QuoteCsv(a.entity.Iri()) + "\n";
  }
  return out;
}

RunResult RunAnnotateWith(const RunConfig &cfg, KnowledgeGraph &backend,
                          Diagnostics &diagnostics) {
  RunResult result;
  result.errors = ValidateConfig(cfg, /*backend_supplied=*/true);
  if (!result.errors.empty()) {
    result.exit_code = 1;
    return result;
  }
  auto *snapshot = dynamic_cast<const SnapshotKnowledgeGraph *>(&backend);
  try {
    return Annotate(cfg, backend, snapshot, diagnostics);
  } catch (const ConfigError &e) {
    result.errors.push_back(e.what());
    result.exit_code = 1;
    return result;
  }
}

RunResult RunAnnotate(const RunConfig &cfg, Diagnostics &diagnostics) {
  RunResult result;
  result.errors = ValidateConfig(cfg);
  if (!result.errors.empty()) {
    result.exit_code = 1;
    return result;
  }
  try {
    if (cfg.backend == BackendKind::kSnapshot) {
      SnapshotKnowledgeGraph snapshot = SnapshotKnowledgeGraph::Load(*cfg.snapshot_path);
      return Annotate(cfg, snapshot, &snapshot, diagnostics);
    }
    RemoteOptions options;
    options.base_url = cfg.api_base_url;
    options.user_agent = cfg.user_agent;
    options.max_in_flight = std::max(1, std::min(cfg.concurrency, 4));
    RemoteKnowledgeGraph remote(options, MakeHttpTransport());
    return Annotate(cfg, remote, nullptr, diagnostics);
  } catch (const ConfigError &e) {
    result.errors.push_back(e.what());
    result.exit_code = 1;
  } catch (const Error &e) {
    // Unreadable or malformed snapshot.
    result.errors.push_back(e.what());
    result.exit_code = 1;
  } catch (const std::invalid_argument &e) {
    result.errors.push_back(e.what());
    result.exit_code = 1;
  }
  return result;
}

SnapshotFetchResult FetchSnapshot(const fs::path &labels_file,
                                  const fs::path &out, KnowledgeGraph &kg,
                                  int limit) {
  SnapshotFetchResult result;
  std::vector<std::string> labels;
  {
    std::istringstream in(ReadFile(labels_file));
    std::string line;
    while (std::getline(in, line)) {
      std::string label = NormalizeCell(line).text();
      if (!label.empty()) labels.push_back(std::move(label));
    }
  }
  if (labels.empty()) {
    result.exit_code = 1;
    return result;
  }

  std::map<EntityId, EntityRecord> records;
  bool unreachable = false;
  for (const auto &label : labels) {
    try {
      CandidateSet set = kg.Search(label, limit);
      if (set.candidates.empty()) result.failures.push_back(label + ": no match");
      for (auto &c : set.candidates) records.emplace(c.id, std::move(c));
    } catch (const BackendUnavailable &e) {
      unreachable = true;
      result.failures.push_back(label + ": " + e.what());
    }
  }

  const fs::path sidecar = fs::path(out.string() + ".failures.txt");
  std::string failures;
  for (const auto &f : result.failures) failures += f + "\n";
  std::error_code ec;
  if (failures.empty()) {
    fs::remove(sidecar, ec);
  } else {
    WriteFileAtomic(sidecar, failures);
  }
  if (records.empty()) {
    result.exit_code = unreachable ? 3 : 4;
    return result;
  }
  std::vector<EntityRecord> sorted;
  for (auto &[id, r] : records) sorted.push_back(std::move(r));
  WriteSnapshot(out, sorted);
  result.records = sorted.size();
  return result;
}

}  // namespace amalgam
