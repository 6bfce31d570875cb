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

// Batch annotation kernels. A column (CTA) or a row (CEA) is an independent
// unit of work, so a whole corpus flattens into one loop. The serial
// versions are the reference; the parallel versions run the same per-item
// function under OpenMP and write each result into its own slot, so the
// output does not depend on the schedule.

#ifndef AMALGAM_KERNELS_H_
#define AMALGAM_KERNELS_H_

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "amalgam/annotation.h"
#include "amalgam/cea.h"
#include "amalgam/cta.h"
#include "amalgam/table.h"

namespace amalgam {

struct ColumnTask {
  const Table *table;
  size_t col;
};

struct RowTask {
  const Table *table;
  size_t row;
  std::set<size_t> cols;
  const ColumnClasses *classes;  // May be null.
};

std::vector<std::optional<ColumnAnnotation>> AnnotateColumnsSerial(
    std::span<const ColumnTask> tasks, AnnotationContext &ctx);

std::vector<std::optional<ColumnAnnotation>> AnnotateColumnsParallel(
    std::span<const ColumnTask> tasks, AnnotationContext &ctx, int threads);

std::vector<std::vector<CellAnnotation>> AnnotateRowsSerial(
    std::span<const RowTask> tasks, AnnotationContext &ctx);

std::vector<std::vector<CellAnnotation>> AnnotateRowsParallel(
    std::span<const RowTask> tasks, AnnotationContext &ctx, int threads);

}  // namespace amalgam

#endif  // AMALGAM_KERNELS_H_
