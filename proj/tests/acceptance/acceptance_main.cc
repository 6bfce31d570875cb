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

// Acceptance suite. Each criterion prints one PASS or FAIL line; the exit
// status is non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amalgam/annotation.h"
#include "amalgam/cta.h"
#include "amalgam/diagnostics.h"
#include "amalgam/evaluator.h"
#include "amalgam/pipeline.h"
#include "amalgam/snapshot.h"
#include "amalgam/spellcheck.h"
#include "amalgam/table.h"
#include "json.hpp"
#include "oracles.h"
#include "synthetic.h"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing_util::FixtureDir;
using testing_util::ReadText;
using testing_util::TempDir;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int Shell(const std::string &command) {
  int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Quote(const fs::path &p) { return "'" + p.string() + "'"; }

std::string AnnotateCommand(const fs::path &corpus, const fs::path &out,
                            const std::string &extra) {
  return std::string("env -u AMALGAM_CACHE_DIR -u AMALGAM_API_BASE_URL ") + AMALGAM_CLI +
         " annotate --tables " + Quote(corpus / "tables") + " --cta-targets " +
         Quote(corpus / "cta_targets.csv") + " --cea-targets " +
         Quote(corpus / "cea_targets.csv") + " --backend snapshot --snapshot " +
         Quote(corpus / "snapshot.jsonl") + " --out " + Quote(out) + " " + extra +
         " >/dev/null 2>&1";
}

// ---------------------------------------------------------------------------

Outcome FixtureEndToEnd() {
  TempDir tmp;
  const fs::path fx = FixtureDir();
  const auto start = std::chrono::steady_clock::now();
  if (Shell(AnnotateCommand(fx, tmp / "out", "--no-cache")) != 0) {
    return {false, "annotate exited non-zero"};
  }
  json scores;
  for (const char *task : {"cta", "cea"}) {
    const fs::path report = tmp / (std::string(task) + ".json");
    const std::string cmd = std::string(AMALGAM_CLI) + " evaluate --task " + task +
                            " --pred " + Quote(tmp / "out" / (std::string(task) + ".csv")) +
                            " --gold " + Quote(fx / ("gold_" + std::string(task) + ".csv")) +
                            " --json " + Quote(report) + " >/dev/null 2>&1";
    if (Shell(cmd) != 0) return {false, std::string("evaluate ") + task + " failed"};
    scores[task] = json::parse(ReadText(report));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << "cta P=" << scores["cta"]["precision"] << " cea P=" << scores["cea"]["precision"]
         << " F1=" << scores["cea"]["f1"] << " in " << seconds << "s";
  const bool ok = scores["cea"]["precision"] == 1.0 && scores["cea"]["f1"] == 1.0 &&
                  scores["cta"]["precision"] == 1.0 && seconds < 5.0;
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------

Outcome FuzzyRatioMatchesOracle() {
  std::mt19937 rng(20260301);
  const std::string alphabet = "abcdeABCDE xyz";
  size_t mismatches = 0;
  std::string first_bad;
  for (int i = 0; i < 1000; ++i) {
    auto make = [&] {
      std::string s(rng() % 31, ' ');
      for (char &c : s) c = alphabet[rng() % alphabet.size()];
      return s;
    };
    const std::string a = make(), b = make();
    if (amalgam::FuzzyRatio(a, b) != oracle::Ratio(a, b)) {
      if (mismatches++ == 0) first_bad = "'" + a + "' vs '" + b + "'";
    }
  }
  const int seminary = amalgam::FuzzyRatio("St Peter's Seminarz", "St Peter's seminary");
  std::ostringstream detail;
  detail << "1000 pairs, " << mismatches << " mismatches; seminary pair = " << seminary;
  if (!first_bad.empty()) detail << "; first mismatch " << first_bad;
  return {mismatches == 0 && seminary == 95, detail.str()};
}

// ---------------------------------------------------------------------------

// Independent re-implementation of column voting over a record list.
class VotingOracle {
 public:
  explicit VotingOracle(const std::vector<amalgam::EntityRecord> &records)
      : records_(records) {
    for (const auto &r : records) {
      terms_.insert(r.label);
      for (const auto &a : r.aliases) terms_.insert(a);
    }
  }

  std::vector<size_t> Lookup(const std::string &label) const {
    std::vector<size_t> hits;
    const std::string q = oracle::Lower(label);
    for (size_t i = 0; i < records_.size(); ++i) {
      bool hit = oracle::Lower(records_[i].label) == q;
      for (const auto &a : records_[i].aliases) hit = hit || oracle::Lower(a) == q;
      if (hit) hits.push_back(i);
    }
    return hits;
  }

  std::optional<std::string> Correct(const std::string &label, int threshold) const {
    std::optional<std::pair<int, std::string>> best;
    for (const auto &t : terms_) {
      if (oracle::Lower(t) == oracle::Lower(label)) continue;
      if (oracle::Osa(label, t) > 2) continue;
      const int r = oracle::Ratio(label, t);
      if (r <= threshold) continue;
      if (!best || r > best->first || (r == best->first && t < best->second)) best = {r, t};
    }
    if (!best) return std::nullopt;
    return best->second;
  }

  // Candidate class lists per cell, as consumed by oracle::Vote.
  std::vector<std::vector<uint64_t>> CellClasses(const std::string &label, int threshold) const {
    std::vector<size_t> hits = Lookup(label);
    if (hits.empty()) {
      if (auto fixed = Correct(label, threshold)) hits = Lookup(*fixed);
    }
    std::vector<std::vector<uint64_t>> out;
    for (size_t h : hits) {
      std::vector<uint64_t> classes;
      for (const auto &c : records_[h].classes) classes.push_back(c.number());
      out.push_back(std::move(classes));
    }
    return out;
  }

 private:
  const std::vector<amalgam::EntityRecord> &records_;
  std::set<std::string> terms_;
};

Outcome VotingMatchesOracle() {
  std::mt19937 rng(77);
  synthetic::NameMaker names(rng);
  std::vector<std::string> pool;
  for (int i = 0; i < 90; ++i) pool.push_back(names.Fresh());
  const uint64_t class_ids[] = {9, 70, 12, 300, 5, 1001};

  std::vector<amalgam::EntityRecord> records;
  for (uint64_t id = 1; id <= 260; ++id) {
    amalgam::EntityRecord r;
    r.id = amalgam::EntityId("Q" + std::to_string(100000 + id));
    r.label = pool[rng() % pool.size()];
    if (rng() % 4 == 0) r.aliases.push_back(pool[rng() % pool.size()]);
    const int n_classes = static_cast<int>(rng() % 4);
    for (int k = 0; k < n_classes; ++k) {
      const std::string prop = k == 2 ? "P279" : "P31";
      r.claims[prop].push_back(
          amalgam::EntityRef{amalgam::EntityId("Q" + std::to_string(class_ids[rng() % 6])), ""});
    }
    r.classes = amalgam::DeriveClasses(r.claims);
    records.push_back(std::move(r));
  }

  amalgam::SnapshotKnowledgeGraph kg(records);
  amalgam::SpellChecker spell{amalgam::TermDictionary(kg.Terms())};
  amalgam::Diagnostics diagnostics;
  amalgam::AnnotationContext ctx{kg, spell, diagnostics};
  VotingOracle oracle_impl(kg.records());

  const synthetic::Typo kinds[] = {synthetic::Typo::kSubstitute, synthetic::Typo::kDelete,
                                   synthetic::Typo::kInsert, synthetic::Typo::kTranspose};
  size_t mismatches = 0, annotated = 0;
  std::string first_bad;
  for (int col = 0; col < 200; ++col) {
    amalgam::ColumnContext column{"t" + std::to_string(col), 0, {}};
    const int n = 3 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      std::string cell = pool[rng() % pool.size()];
      const unsigned roll = rng() % 10;
      if (roll < 3) cell = synthetic::InjectTypo(cell, kinds[rng() % 4], rng);
      else if (roll == 3) cell = oracle::Lower(cell);
      else if (roll == 4) cell = names.Word() + "zq";
      column.items.push_back(cell);
    }
    std::vector<std::vector<std::vector<uint64_t>>> cells;
    for (const auto &item : column.items) cells.push_back(oracle_impl.CellClasses(item, 90));
    const auto expected = oracle::Vote(cells);
    const auto got = amalgam::AnnotateColumn(column, ctx);
    const bool same = expected.has_value() == got.has_value() &&
                      (!got || (got->class_id.number() == expected->first &&
                                got->support == expected->second));
    if (got) ++annotated;
    if (!same && mismatches++ == 0) {
      first_bad = "column " + column.table_id;
    }
  }
  std::ostringstream detail;
  detail << "200 columns (" << annotated << " annotated), " << mismatches << " mismatches";
  if (!first_bad.empty()) detail << "; first at " << first_bad;
  return {mismatches == 0, detail.str()};
}

// ---------------------------------------------------------------------------

Outcome Determinism(const fs::path &synthetic_corpus) {
  TempDir tmp;
  size_t runs = 0;
  std::set<std::string> variants;
  for (const fs::path &corpus : {FixtureDir(), synthetic_corpus}) {
    std::string reference;
    for (int threads : {1, 2, 8}) {
      for (int rep = 0; rep < 3; ++rep) {
        const fs::path out = tmp / ("run" + std::to_string(runs++));
        if (Shell(AnnotateCommand(corpus, out,
                                  "--no-cache --concurrency " + std::to_string(threads))) != 0) {
          return {false, "annotate failed at concurrency " + std::to_string(threads)};
        }
        const std::string bytes = ReadText(out / "cta.csv") + "\x1f" + ReadText(out / "cea.csv");
        if (reference.empty()) reference = bytes;
        variants.insert(corpus.string() + (bytes == reference ? "=" : "!=") );
      }
    }
  }
  const bool ok = variants.size() == 2;  // One "=" per corpus, no "!=".
  return {ok, std::to_string(runs) + " runs over 2 corpora at concurrency 1/2/8, " +
                  (ok ? "all byte-identical" : "outputs differ")};
}

// ---------------------------------------------------------------------------

std::set<std::string> CeaKeys(const fs::path &cea_csv) {
  std::set<std::string> out;
  std::istringstream in(ReadText(cea_csv));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.insert(line);
  }
  return out;
}

Outcome SpellcheckRecovery(const synthetic::World &world, const fs::path &clean_corpus) {
  TempDir tmp;
  const fs::path noisy_corpus = tmp / "noisy";
  std::mt19937 rng(4242);
  std::vector<std::string> heads;
  for (const auto &r : world.rows) heads.push_back(r.town);
  std::vector<size_t> order(world.rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const size_t n_noisy = world.rows.size() * 3 / 10;
  std::map<size_t, synthetic::Typo> typo_of;
  for (size_t k = 0; k < n_noisy; ++k) {
    const auto kind = static_cast<synthetic::Typo>(rng() % 4);
    heads[order[k]] = synthetic::InjectTypo(heads[order[k]], kind, rng);
    typo_of[order[k]] = kind;
  }
  synthetic::WriteCorpus(world, noisy_corpus, 3, heads);

  if (Shell(AnnotateCommand(clean_corpus, tmp / "clean", "--no-cache")) != 0 ||
      Shell(AnnotateCommand(noisy_corpus, tmp / "noisy_out", "--no-cache")) != 0) {
    return {false, "annotate failed"};
  }
  const auto clean = CeaKeys(tmp / "clean" / "cea.csv");
  const auto noisy = CeaKeys(tmp / "noisy_out" / "cea.csv");
  size_t kept = 0;
  for (const auto &line : clean) kept += noisy.count(line);
  const double recovery = clean.empty() ? 0 : static_cast<double>(kept) / clean.size();

  // Per-kind breakdown over the corrupted head cells.
  const size_t per = (world.rows.size() + 2) / 3;
  std::map<std::string, std::pair<int, int>> by_kind;
  for (const auto &[row, kind] : typo_of) {
    const std::string prefix = "\"towns_" + std::to_string(row / per) + "\",\"" +
                               std::to_string(row % per) + "\",\"0\",";
    const auto it = clean.lower_bound(prefix);
    const bool recovered =
        it != clean.end() && it->rfind(prefix, 0) == 0 && noisy.count(*it) == 1;
    auto &slot = by_kind[synthetic::TypoName(kind)];
    slot.first += recovered;
    slot.second += 1;
  }
  std::ostringstream detail;
  detail.precision(4);
  detail << "recovered " << kept << "/" << clean.size() << " = " << recovery
         << " with " << n_noisy << " noisy heads; heads fixed by kind:";
  for (const auto &[name, counts] : by_kind) {
    detail << " " << name << " " << counts.first << "/" << counts.second;
  }
  return {recovery >= 0.9, detail.str()};
}

// ---------------------------------------------------------------------------

Outcome EvaluatorAlgebra() {
  using amalgam::AnnotationMap;
  std::mt19937 rng(99);
  auto key = [](int i) { return "t," + std::to_string(i) + ",0"; };
  auto value = [&](int range) { return "Q" + std::to_string(1 + rng() % range); };
  size_t mismatches = 0, violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    AnnotationMap gold, pred;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) gold[key(i)] = value(3);
    for (int i = 0; i < n + 5; ++i) {
      if (rng() % 3) pred[key(i)] = value(3);
    }
    const auto got = amalgam::Score(pred, gold, amalgam::Task::kCea);
    const auto want = oracle::Score(pred, gold);
    if (std::abs(got.precision - want.precision) > 1e-12 ||
        std::abs(got.recall - want.recall) > 1e-12 || std::abs(got.f1 - want.f1) > 1e-12) {
      ++mismatches;
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    AnnotationMap gold, pred;
    const int n = 2 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) gold[key(i)] = value(4);
    std::vector<int> open;
    for (int i = 0; i < n; ++i) {
      if (rng() % 2) pred[key(i)] = value(4);
      else open.push_back(i);
    }
    if (open.empty()) continue;
    const int row = open[rng() % open.size()];
    const auto before = amalgam::Score(pred, gold, amalgam::Task::kCea);
    AnnotationMap right = pred, wrong = pred;
    right[key(row)] = gold[key(row)];
    wrong[key(row)] = "Q999";
    if (amalgam::Score(right, gold, amalgam::Task::kCea).f1 < before.f1) ++violations;
    if (amalgam::Score(wrong, gold, amalgam::Task::kCea).precision > before.precision) ++violations;
  }
  return {mismatches == 0 && violations == 0,
          "50 oracle comparisons (" + std::to_string(mismatches) + " mismatches), 100 mutations (" +
              std::to_string(violations) + " monotonicity violations)"};
}

// ---------------------------------------------------------------------------

Outcome CacheTransparency() {
  TempDir tmp;
  const fs::path fx = FixtureDir();
  const std::string cache = "--cache-dir " + Quote(tmp / "cache");
  if (Shell(AnnotateCommand(fx, tmp / "cold", cache)) != 0 ||
      Shell(AnnotateCommand(fx, tmp / "warm", cache)) != 0 ||
      Shell(AnnotateCommand(fx, tmp / "off", "--no-cache")) != 0) {
    return {false, "annotate failed"};
  }
  auto outputs = [&](const char *run) {
    return ReadText(tmp / run / "cta.csv") + "\x1f" + ReadText(tmp / run / "cea.csv");
  };
  const json cold = json::parse(ReadText(tmp / "cold" / "manifest.json"));
  const json warm = json::parse(ReadText(tmp / "warm" / "manifest.json"));
  const auto calls = [](const json &m) {
    return m["backend_calls"]["search"].get<uint64_t>() +
           m["backend_calls"]["get_entity"].get<uint64_t>();
  };
  const bool same = outputs("cold") == outputs("warm") && outputs("cold") == outputs("off");
  const bool ok = same && calls(warm) == 0 && calls(cold) > 0;
  return {ok, std::string(same ? "identical" : "different") + " outputs; backend calls cold " +
                  std::to_string(calls(cold)) + ", warm " + std::to_string(calls(warm))};
}

}  // namespace

int main() {
  TempDir corpus_dir;
  const synthetic::World world = synthetic::MakeWorld(300, 2026);
  synthetic::WriteCorpus(world, corpus_dir.path(), 3);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fixture_end_to_end", FixtureEndToEnd},
      {"fuzzy_ratio_oracle", FuzzyRatioMatchesOracle},
      {"column_voting_oracle", VotingMatchesOracle},
      {"deterministic_output", [&] { return Determinism(corpus_dir.path()); }},
      {"spellcheck_recovery", [&] { return SpellcheckRecovery(world, corpus_dir.path()); }},
      {"evaluator_algebra", EvaluatorAlgebra},
      {"cache_transparency", CacheTransparency},
  };
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failed += !o.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
