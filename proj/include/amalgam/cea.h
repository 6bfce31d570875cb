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

// Cell entity annotation.
//
// The first cell of a row names the row's head entity; its claims are the
// context for the rest of the row. A later cell whose text equals a claim
// value is linked to the entity that claim points at. Cells that match a
// literal or quantity claim are confirmed but get no entity, and cells that
// match nothing are looked up directly. Lookups, for the head as well as
// the other cells, follow one cascade:
//
//   one candidate                      -> take it
//   several, column class known        -> keep those with the class;
//                                         take the top-ranked survivor
//   several, no column class           -> no annotation
//   none, or no survivor               -> look up the best spelling
//                                         correction once, same rules
//
// Column classes come from the CTA pass.

#ifndef AMALGAM_CEA_H_
#define AMALGAM_CEA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amalgam/annotation.h"
#include "amalgam/kg.h"
#include "amalgam/table.h"

namespace amalgam {

enum class LinkMethod { kPropLookup, kDirectUnique, kSpellCorrected, kClassFiltered };

std::string_view LinkMethodName(LinkMethod m);

struct CellTarget {
  std::string table_id;
  size_t row = 0;
  size_t col = 0;
  auto operator<=>(const CellTarget &) const = default;
};

struct CellAnnotation {
  std::string table_id;
  size_t row = 0;
  size_t col = 0;
  EntityId entity{"Q0"};
  LinkMethod method = LinkMethod::kDirectUnique;
  bool operator==(const CellAnnotation &) const = default;
};

// Column index -> class chosen by CTA. Absent columns are not filtered.
using ColumnClasses = std::map<size_t, EntityId>;

struct LinkedEntity {
  EntityRecord record;
  LinkMethod method;
};

// Runs the lookup cascade above for one label.
std::optional<LinkedEntity> LinkEntity(std::string_view label,
                                       const std::optional<EntityId> &column_class,
                                       AnnotationContext &ctx);

inline std::optional<LinkedEntity> ResolveHeadEntity(
    std::string_view label, const std::optional<EntityId> &column_class,
    AnnotationContext &ctx) {
  return LinkEntity(label, column_class, ctx);
}

// Index of the head entity's claim values, keyed by normalized, case-folded
// text. Entity references are keyed by the referenced entity's label,
// literals by their text; quantities are compared numerically.
class HeadEntityContext {
 public:
  enum class MatchKind { kNone, kEntity, kLiteral };
  struct Match {
    MatchKind kind = MatchKind::kNone;
    std::optional<EntityId> entity;
  };

  HeadEntityContext(size_t row, std::optional<EntityRecord> entity);

  size_t row() const { return row_; }
  const std::optional<EntityRecord> &entity() const { return entity_; }

  // An entity match wins over a literal one when both share a key; among
  // entity references the first in (property, claim) order wins.
  Match Lookup(std::string_view cell) const;

  // Key used for `text` in the index.
  static std::string Key(std::string_view text);

  // Canonical decimal rendering of a quantity.
  static std::string QuantityKey(double amount);

 private:
  size_t row_;
  std::optional<EntityRecord> entity_;
  std::unordered_map<std::string, Match> index_;
  std::vector<double> quantities_;
};

// Cells equal to a quantity within 1e-6 * max(1, |amount|) match it.
bool QuantityMatches(std::string_view cell, double amount);

// Links `cell` through the head's claims. Only entity-reference matches
// produce an annotation. Throws std::invalid_argument without a head entity.
std::optional<CellAnnotation> PropLookup(std::string_view cell,
                                         const HeadEntityContext &head,
                                         const std::string &table_id,
                                         size_t col);

// Annotates the `target_cols` of one row, sorted by column.
std::vector<CellAnnotation> AnnotateRow(const RowContext &row,
                                        const ColumnClasses &classes,
                                        const std::set<size_t> &target_cols,
                                        AnnotationContext &ctx);

// Annotates the targets that belong to `table`, sorted by (row, col). Rows
// without targets are not looked at; out-of-range targets are counted as
// unknown_cell warnings.
std::vector<CellAnnotation> AnnotateTableCea(const Table &table,
                                             std::span<const CellTarget> targets,
                                             const ColumnClasses &classes,
                                             AnnotationContext &ctx);

// Groups the valid targets of `table` by row.
std::map<size_t, std::set<size_t>> GroupTargetsByRow(
    const Table &table, std::span<const CellTarget> targets,
    Diagnostics &diagnostics);

}  // namespace amalgam

#endif  // AMALGAM_CEA_H_
