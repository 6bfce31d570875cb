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

// Command-line front end.
//
//   amalgam annotate  --tables DIR --cta-targets F --cea-targets F ...
//   amalgam evaluate  --task cta|cea --pred F --gold F [--json F]
//   amalgam snapshot fetch --labels F --out F ...
//   amalgam cache purge --cache-dir DIR
//
// Settings resolve as: flags, then environment, then --config file.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "amalgam/errors.h"
#include "amalgam/evaluator.h"
#include "amalgam/lookup_cache.h"
#include "amalgam/pipeline.h"
#include "amalgam/remote.h"
#include "amalgam/snapshot.h"
#include "amalgam/table.h"

namespace {

using amalgam::BackendKind;
using amalgam::RunConfig;

// Flag values as parsed; only options the user actually gave are applied.
struct AnnotateFlags {
  std::string config, tables, cta_targets, cea_targets, backend, snapshot,
      api_base_url, user_agent, cache_dir, out, wordlist;
  int limit = 0, threshold = 0, concurrency = 0;
  bool no_cache = false, verbose = false;
};

int RunAnnotateCommand(CLI::App &cmd, const AnnotateFlags &f) {
  RunConfig cfg;
  try {
    if (cmd.count("--config")) {
      std::ifstream in(f.config);
      if (!in) throw amalgam::ConfigError("cannot open config " + f.config);
      amalgam::ApplyConfigJson(cfg, nlohmann::json::parse(in));
    }
  } catch (const std::exception &e) {
    std::cerr << "amalgam: " << e.what() << "\n";
    return 1;
  }
  amalgam::ApplyEnvironment(cfg, [](const char *name) { return std::getenv(name); });

  if (cmd.count("--tables")) cfg.tables_dir = f.tables;
  if (cmd.count("--cta-targets")) cfg.targets_cta = f.cta_targets;
  if (cmd.count("--cea-targets")) cfg.targets_cea = f.cea_targets;
  if (cmd.count("--backend")) {
    cfg.backend = f.backend == "remote" ? BackendKind::kRemote : BackendKind::kSnapshot;
  }
  if (cmd.count("--snapshot")) cfg.snapshot_path = f.snapshot;
  if (cmd.count("--api-base-url")) cfg.api_base_url = f.api_base_url;
  if (cmd.count("--user-agent")) cfg.user_agent = f.user_agent;
  if (cmd.count("--limit")) cfg.limit = f.limit;
  if (cmd.count("--threshold")) cfg.threshold = f.threshold;
  if (cmd.count("--concurrency")) cfg.concurrency = f.concurrency;
  if (cmd.count("--cache-dir")) cfg.cache_dir = f.cache_dir;
  if (cmd.count("--out")) cfg.out_dir = f.out;
  if (cmd.count("--wordlist")) cfg.wordlist = f.wordlist;
  if (f.no_cache) cfg.cache_dir.reset();
  cfg.verbose = f.verbose;

  amalgam::Diagnostics diagnostics;
  diagnostics.set_verbose(f.verbose);
  amalgam::RunResult result = amalgam::RunAnnotate(cfg, diagnostics);
  for (const auto &e : result.errors) std::cerr << "amalgam: " << e << "\n";
  if (result.exit_code == 1) {
    std::cerr << "usage: " << cmd.help("", CLI::AppFormatMode::Sub) << "\n";
    return 1;
  }
  if (result.exit_code != 0) return result.exit_code;

  std::cout << "tables: " << result.tables_loaded << " loaded, "
            << result.tables_skipped << " skipped\n"
            << "cta: " << result.cta.size() << " annotations\n"
            << "cea: " << result.cea.size() << " annotations\n"
            << "warnings: " << diagnostics.total() << "\n"
            << "outputs in " << cfg.out_dir.string() << "\n";
  return 0;
}

int RunEvaluateCommand(const std::string &task_name, const std::string &pred,
                       const std::string &gold, const std::string &json_out) {
  auto task = amalgam::ParseTask(task_name);
  if (!task) {
    std::cerr << "amalgam: unknown task '" << task_name << "'\n";
    return 1;
  }
  try {
    amalgam::ScoreReport report = amalgam::ScoreFiles(pred, gold, *task);
    std::cout << amalgam::FormatReport(report);
    std::string json = amalgam::ToJson(report).dump();
    if (json_out.empty()) {
      std::cout << json << "\n";
    } else {
      amalgam::WriteFileAtomic(json_out, json + "\n");
    }
    return 0;
  } catch (const amalgam::IoError &e) {
    std::cerr << "amalgam: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "amalgam: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Annotate CSV tables with knowledge-graph classes and entities"};
  app.require_subcommand(1);

  // annotate
  AnnotateFlags af;
  auto *annotate = app.add_subcommand("annotate", "Run column and cell annotation");
  annotate->add_option("--config", af.config, "JSON config file (lowest precedence)");
  annotate->add_option("--tables", af.tables, "Directory of CSV tables");
  annotate->add_option("--cta-targets", af.cta_targets, "CTA targets CSV (table,col)");
  annotate->add_option("--cea-targets", af.cea_targets, "CEA targets CSV (table,row,col)");
  annotate->add_option("--backend", af.backend, "snapshot or remote")
      ->check(CLI::IsMember({"snapshot", "remote"}));
  annotate->add_option("--snapshot", af.snapshot, "JSON-Lines snapshot file");
  annotate->add_option("--api-base-url", af.api_base_url,
                       "Wikidata API endpoint (env AMALGAM_API_BASE_URL)");
  annotate->add_option("--user-agent", af.user_agent,
                       "User-Agent for the remote API (env AMALGAM_USER_AGENT)");
  annotate->add_option("--limit", af.limit, "Candidates per lookup (default 10)");
  annotate->add_option("--threshold", af.threshold, "Fuzzy ratio threshold (default 90)");
  annotate->add_option("--concurrency", af.concurrency, "Worker threads (default 4)");
  annotate->add_option("--cache-dir", af.cache_dir,
                       "Lookup cache directory (env AMALGAM_CACHE_DIR)");
  annotate->add_flag("--no-cache", af.no_cache, "Disable the lookup cache");
  annotate->add_option("--out", af.out, "Output directory (default .)");
  annotate->add_option("--wordlist", af.wordlist, "Extra spelling terms, one per line");
  annotate->add_flag("-v,--verbose", af.verbose, "Print warnings as they happen");

  // evaluate
  std::string task, pred, gold, json_out;
  auto *evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
  evaluate->add_option("--task", task, "cta or cea")->required();
  evaluate->add_option("--pred", pred, "Predictions CSV")->required();
  evaluate->add_option("--gold", gold, "Gold CSV")->required();
  evaluate->add_option("--json", json_out, "Write the JSON summary here");

  // snapshot fetch
  std::string labels, snapshot_out, base_url = amalgam::RemoteOptions::kDefaultBaseUrl,
                                    user_agent;
  int fetch_limit = 10;
  auto *snapshot = app.add_subcommand("snapshot", "Snapshot management");
  snapshot->require_subcommand(1);
  auto *fetch = snapshot->add_subcommand("fetch", "Build a snapshot from the remote API");
  fetch->add_option("--labels", labels, "Labels file, one per line")->required();
  fetch->add_option("--out", snapshot_out, "Snapshot file to write")->required();
  fetch->add_option("--api-base-url", base_url, "Wikidata API endpoint")
      ->envname("AMALGAM_API_BASE_URL");
  fetch->add_option("--user-agent", user_agent, "User-Agent header")
      ->envname("AMALGAM_USER_AGENT");
  fetch->add_option("--limit", fetch_limit, "Candidates per label")
      ->check(CLI::Range(1, 50));

  // cache purge
  std::string purge_dir;
  auto *cache = app.add_subcommand("cache", "Lookup cache management");
  cache->require_subcommand(1);
  auto *purge = cache->add_subcommand("purge", "Delete every cached lookup");
  purge->add_option("--cache-dir", purge_dir, "Cache directory")
      ->envname("AMALGAM_CACHE_DIR")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*annotate) return RunAnnotateCommand(*annotate, af);
  if (*evaluate) return RunEvaluateCommand(task, pred, gold, json_out);
  if (*fetch) {
    if (user_agent.empty()) {
      std::cerr << "amalgam: --user-agent is required for the remote API\n";
      return 1;
    }
    try {
      amalgam::RemoteOptions options;
      options.base_url = base_url;
      options.user_agent = user_agent;
      amalgam::RemoteKnowledgeGraph remote(options, amalgam::MakeHttpTransport());
      auto result = amalgam::FetchSnapshot(labels, snapshot_out, remote, fetch_limit);
      for (const auto &f : result.failures) std::cerr << "failed: " << f << "\n";
      if (result.exit_code == 0) {
        std::cout << "wrote " << result.records << " records to " << snapshot_out << "\n";
      } else if (result.exit_code == 1) {
        std::cerr << "amalgam: labels file is empty\n";
      }
      return result.exit_code;
    } catch (const std::exception &e) {
      std::cerr << "amalgam: " << e.what() << "\n";
      return 1;
    }
  }
  if (*purge) {
    try {
      amalgam::LookupCache c(purge_dir);
      std::cout << "removed " << c.Purge() << " cache entries\n";
      return 0;
    } catch (const std::exception &e) {
      std::cerr << "amalgam: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
