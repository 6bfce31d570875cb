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

// Serial reference kernels against their OpenMP counterparts.
//
//   build/bench/bench_kernels --benchmark_filter=Nearest

#include <omp.h>

#include <string>
#include <vector>

#include "amalgam/annotation.h"
#include "amalgam/diagnostics.h"
#include "amalgam/kernels.h"
#include "amalgam/snapshot.h"
#include "amalgam/spellcheck.h"
#include "amalgam/table.h"
#include "benchmark/benchmark.h"
#include "synthetic.h"

namespace {

struct Corpus {
  Corpus() : world(synthetic::MakeWorld(2000, 7)), kg(world.records) {}
  synthetic::World world;
  amalgam::SnapshotKnowledgeGraph kg;
};

Corpus &Shared() {
  static Corpus corpus;
  return corpus;
}

amalgam::TermDictionary Dictionary() {
  static const amalgam::TermDictionary dict(Shared().kg.Terms());
  return dict;
}

void BM_NearestSerial(benchmark::State &state) {
  const auto dict = Dictionary();
  const std::string query = Shared().world.rows[17].town + "x";
  for (auto _ : state) benchmark::DoNotOptimize(dict.NearestSerial(query, 2));
  state.SetItemsProcessed(state.iterations() * dict.size());
}
BENCHMARK(BM_NearestSerial);

void BM_NearestParallel(benchmark::State &state) {
  const auto dict = Dictionary();
  const std::string query = Shared().world.rows[17].town + "x";
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dict.Nearest(query, 2));
  state.SetItemsProcessed(state.iterations() * dict.size());
}
BENCHMARK(BM_NearestParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

// One table holding every row; targets the town, neighbour and region columns.
struct RowBench {
  RowBench() {
    std::string csv;
    for (const auto &r : Shared().world.rows) {
      std::string head = r.town;
      if (csv.size() % 5 == 0) head.pop_back();  // Some cells need correction.
      csv += amalgam::QuoteCsv(head) + "," + amalgam::QuoteCsv(r.neighbour) + "," +
             amalgam::QuoteCsv(r.region) + "," + std::to_string(r.elevation) + "\n";
    }
    table.emplace(amalgam::TableFromCsv("bench", csv));
    for (size_t i = 0; i < table->rows(); ++i) tasks.push_back({&*table, i, {0, 1, 2}, nullptr});
  }
  std::optional<amalgam::Table> table;
  std::vector<amalgam::RowTask> tasks;
};

void BM_RowsSerial(benchmark::State &state) {
  RowBench rows;
  amalgam::SpellChecker spell(Dictionary());
  amalgam::Diagnostics diagnostics;
  amalgam::AnnotationContext ctx{Shared().kg, spell, diagnostics};
  for (auto _ : state) benchmark::DoNotOptimize(amalgam::AnnotateRowsSerial(rows.tasks, ctx));
  state.SetItemsProcessed(state.iterations() * rows.tasks.size());
}
BENCHMARK(BM_RowsSerial)->Unit(benchmark::kMillisecond);

void BM_RowsParallel(benchmark::State &state) {
  RowBench rows;
  amalgam::SpellChecker spell(Dictionary());
  amalgam::Diagnostics diagnostics;
  amalgam::AnnotationContext ctx{Shared().kg, spell, diagnostics};
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(amalgam::AnnotateRowsParallel(rows.tasks, ctx, threads));
  }
  state.SetItemsProcessed(state.iterations() * rows.tasks.size());
}
BENCHMARK(BM_RowsParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
