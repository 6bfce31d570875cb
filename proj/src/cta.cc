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

#include "amalgam/cta.h"

#include <algorithm>
#include <set>

namespace amalgam {

std::optional<EntityRecord> ResolveUnambiguous(std::string_view label,
                                               AnnotationContext &ctx) {
  auto found = SearchOrWarn(label, ctx);
  if (!found) return std::nullopt;
  if (found->candidates.size() == 1) return std::move(found->candidates[0]);
  if (!found->candidates.empty()) return std::nullopt;

  auto corrected = BestCorrection(label, ctx);
  if (!corrected) return std::nullopt;
  found = SearchOrWarn(*corrected, ctx);
  if (found && found->candidates.size() == 1) {
    return std::move(found->candidates[0]);
  }
  return std::nullopt;
}

ColumnTally TallyColumn(const ColumnContext &column, AnnotationContext &ctx) {
  ColumnTally tally;
  for (const std::string &item : column.items) {
    ++tally.items;
    auto entity = ResolveUnambiguous(item, ctx);
    if (!entity || entity->classes.empty()) continue;
    ++tally.contributing;
    for (const EntityId &c : entity->classes) ++tally.votes[c];
  }
  return tally;
}

std::optional<ColumnAnnotation> ChooseClass(const ColumnContext &column,
                                            const ColumnTally &tally) {
  if (tally.votes.empty() || tally.items == 0) return std::nullopt;
  // The map iterates in ascending id order, so the first maximum wins ties.
  auto best = tally.votes.begin();
  for (auto it = tally.votes.begin(); it != tally.votes.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return ColumnAnnotation{
      column.table_id, column.col, best->first, best->second,
      static_cast<double>(tally.contributing) / static_cast<double>(tally.items)};
}

std::optional<ColumnAnnotation> AnnotateColumn(const ColumnContext &column,
                                               AnnotationContext &ctx) {
  return ChooseClass(column, TallyColumn(column, ctx));
}

std::vector<ColumnAnnotation> AnnotateTableCta(
    const Table &table, std::span<const ColumnTarget> targets,
    AnnotationContext &ctx) {
  std::set<size_t> cols;
  for (const ColumnTarget &t : targets) {
    if (t.table_id != table.id()) continue;
    if (t.col >= table.cols()) {
      ctx.diagnostics.Warn(Warning::kUnknownColumn,
                           table.id() + " column " + std::to_string(t.col));
      continue;
    }
    cols.insert(t.col);
  }
  std::vector<ColumnAnnotation> out;
  for (size_t col : cols) {
    if (auto a = AnnotateColumn(table.Column(col), ctx)) out.push_back(*a);
  }
  return out;
}

}  // namespace amalgam
