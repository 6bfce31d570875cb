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

#include "amalgam/kernels.h"

#include <exception>
#include <mutex>
#include <stdexcept>

namespace amalgam {

namespace {

const ColumnClasses kNoClasses;

std::optional<ColumnAnnotation> RunColumn(const ColumnTask &task,
                                          AnnotationContext &ctx) {
  return AnnotateColumn(task.table->Column(task.col), ctx);
}

std::vector<CellAnnotation> RunRow(const RowTask &task, AnnotationContext &ctx) {
  return AnnotateRow(task.table->Row(task.row),
                     task.classes ? *task.classes : kNoClasses, task.cols, ctx);
}

// Runs fn(i) for every index on `threads` OpenMP threads. The first
// exception thrown by any item is rethrown after the loop.
template <typename Fn>
void ParallelFor(size_t n, int threads, Fn fn) {
  if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
  std::exception_ptr error;
  std::mutex error_mu;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<std::optional<ColumnAnnotation>> AnnotateColumnsSerial(
    std::span<const ColumnTask> tasks, AnnotationContext &ctx) {
  std::vector<std::optional<ColumnAnnotation>> out;
  out.reserve(tasks.size());
  for (const ColumnTask &t : tasks) out.push_back(RunColumn(t, ctx));
  return out;
}

std::vector<std::optional<ColumnAnnotation>> AnnotateColumnsParallel(
    std::span<const ColumnTask> tasks, AnnotationContext &ctx, int threads) {
  std::vector<std::optional<ColumnAnnotation>> out(tasks.size());
  ParallelFor(tasks.size(), threads,
              [&](size_t i) { out[i] = RunColumn(tasks[i], ctx); });
  return out;
}

std::vector<std::vector<CellAnnotation>> AnnotateRowsSerial(
    std::span<const RowTask> tasks, AnnotationContext &ctx) {
  std::vector<std::vector<CellAnnotation>> out;
  out.reserve(tasks.size());
  for (const RowTask &t : tasks) out.push_back(RunRow(t, ctx));
  return out;
}

std::vector<std::vector<CellAnnotation>> AnnotateRowsParallel(
    std::span<const RowTask> tasks, AnnotationContext &ctx, int threads) {
  std::vector<std::vector<CellAnnotation>> out(tasks.size());
  ParallelFor(tasks.size(), threads,
              [&](size_t i) { out[i] = RunRow(tasks[i], ctx); });
  return out;
}

}  // namespace amalgam
