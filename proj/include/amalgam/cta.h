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

// Column type annotation.
//
// Each cell of the column is looked up. A lookup with exactly one candidate
// is a match; with none, the best spelling correction is looked up once
// more and again only a single candidate counts; anything ambiguous is
// skipped. Every matched entity votes once for each of its classes and the
// class with the most votes annotates the column. Ties go to the smaller
// numeric id. There is no minimum support: one matched cell is enough, and
// `coverage` tells downstream users how much of the column agreed.

#ifndef AMALGAM_CTA_H_
#define AMALGAM_CTA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amalgam/annotation.h"
#include "amalgam/kg.h"
#include "amalgam/table.h"

namespace amalgam {

struct ColumnTarget {
  std::string table_id;
  size_t col = 0;
  auto operator<=>(const ColumnTarget &) const = default;
};

struct ColumnAnnotation {
  std::string table_id;
  size_t col = 0;
  EntityId class_id{"Q0"};
  uint64_t support = 0;   // Votes for class_id.
  double coverage = 0;    // Contributing cells / Text cells in the column.
  bool operator==(const ColumnAnnotation &) const = default;
};

using VoteTally = std::map<EntityId, uint64_t>;

struct ColumnTally {
  VoteTally votes;
  size_t items = 0;         // Text cells examined.
  size_t contributing = 0;  // Uniquely resolved cells with at least one class.
};

std::optional<EntityRecord> ResolveUnambiguous(std::string_view label,
                                               AnnotationContext &ctx);

ColumnTally TallyColumn(const ColumnContext &column, AnnotationContext &ctx);

// Winner of a tally; nullopt when nothing voted.
std::optional<ColumnAnnotation> ChooseClass(const ColumnContext &column,
                                            const ColumnTally &tally);

std::optional<ColumnAnnotation> AnnotateColumn(const ColumnContext &column,
                                               AnnotationContext &ctx);

// Annotates the targets that belong to `table`; targets for other tables are
// ignored and out-of-range columns are counted as unknown_column warnings.
// Output is sorted by column.
std::vector<ColumnAnnotation> AnnotateTableCta(
    const Table &table, std::span<const ColumnTarget> targets,
    AnnotationContext &ctx);

}  // namespace amalgam

#endif  // AMALGAM_CTA_H_
