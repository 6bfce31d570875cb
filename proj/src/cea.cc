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

#include "amalgam/cea.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "amalgam/text.h"

namespace amalgam {

namespace {

bool HasClass(const EntityRecord &r, const EntityId &cls) {
  return std::find(r.classes.begin(), r.classes.end(), cls) != r.classes.end();
}

std::optional<double> ParseDecimal(std::string_view text) {
  std::string s = NormalizeCell(text).text();
  std::string_view v = s;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  if (v.empty()) return std::nullopt;
  double out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out)) {
    return std::nullopt;
  }
  return out;
}

enum class Outcome { kLinked, kRetry, kStop };

// One pass of the cascade over a single label.
Outcome TryLink(std::string_view label, const std::optional<EntityId> &cls,
                bool corrected, AnnotationContext &ctx,
                std::optional<LinkedEntity> &out) {
  auto found = SearchOrWarn(label, ctx);
  if (!found) return Outcome::kStop;
  auto &cands = found->candidates;
  if (cands.size() == 1) {
    out = LinkedEntity{std::move(cands[0]), corrected ? LinkMethod::kSpellCorrected
                                                      : LinkMethod::kDirectUnique};
    return Outcome::kLinked;
  }
  if (cands.empty()) return Outcome::kRetry;
  if (!cls) return Outcome::kStop;
  for (auto &c : cands) {
    if (HasClass(c, *cls)) {
      out = LinkedEntity{std::move(c), corrected ? LinkMethod::kSpellCorrected
                                                 : LinkMethod::kClassFiltered};
      return Outcome::kLinked;
    }
  }
  return Outcome::kRetry;
}

}  // namespace

std::string_view LinkMethodName(LinkMethod m) {
  switch (m) {
    case LinkMethod::kPropLookup: return "prop_lookup";
    case LinkMethod::kDirectUnique: return "direct_unique";
    case LinkMethod::kSpellCorrected: return "spell_corrected";
    case LinkMethod::kClassFiltered: return "class_filtered";
  }
  return "unknown";
}

std::optional<LinkedEntity> LinkEntity(std::string_view label,
                                       const std::optional<EntityId> &column_class,
                                       AnnotationContext &ctx) {
  std::optional<LinkedEntity> out;
  if (TryLink(label, column_class, false, ctx, out) != Outcome::kRetry) {
    return out;
  }
  if (auto corrected = BestCorrection(label, ctx)) {
    TryLink(*corrected, column_class, true, ctx, out);
  }
  return out;
}

std::string HeadEntityContext::Key(std::string_view text) {
  return FoldedKey(NormalizeCell(text).text());
}

std::string HeadEntityContext::QuantityKey(double amount) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), amount);
  return ec == std::errc() ? std::string(buf, end) : std::string();
}

HeadEntityContext::HeadEntityContext(size_t row,
                                     std::optional<EntityRecord> entity)
    : row_(row), entity_(std::move(entity)) {
  if (!entity_) return;
  for (const auto &[prop, values] : entity_->claims) {
    for (const ClaimValue &v : values) {
      if (const auto *ref = std::get_if<EntityRef>(&v)) {
        std::string key = Key(ref->label);
        if (key.empty()) continue;
        Match &m = index_[key];
        if (m.kind != MatchKind::kEntity) m = {MatchKind::kEntity, ref->id};
      } else if (const auto *lit = std::get_if<Literal>(&v)) {
        std::string key = Key(lit->text);
        if (key.empty()) continue;
        index_.try_emplace(key, Match{MatchKind::kLiteral, std::nullopt});
      } else if (const auto *q = std::get_if<Quantity>(&v)) {
        quantities_.push_back(q->amount);
        index_.try_emplace(QuantityKey(q->amount),
                           Match{MatchKind::kLiteral, std::nullopt});
      }
    }
  }
}

HeadEntityContext::Match HeadEntityContext::Lookup(std::string_view cell) const {
  std::string key = Key(cell);
  if (key.empty()) return {};
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  for (double amount : quantities_) {
    if (QuantityMatches(cell, amount)) return {MatchKind::kLiteral, std::nullopt};
  }
  return {};
}

bool QuantityMatches(std::string_view cell, double amount) {
  auto value = ParseDecimal(cell);
  if (!value) return false;
  return std::fabs(*value - amount) <= 1e-6 * std::max(1.0, std::fabs(amount));
}

std::optional<CellAnnotation> PropLookup(std::string_view cell,
                                         const HeadEntityContext &head,
                                         const std::string &table_id,
                                         size_t col) {
  if (!head.entity()) {
    throw std::invalid_argument("prop lookup needs a resolved head entity");
  }
  HeadEntityContext::Match m = head.Lookup(cell);
  if (m.kind != HeadEntityContext::MatchKind::kEntity) return std::nullopt;
  return CellAnnotation{table_id, head.row(), col, *m.entity,
                        LinkMethod::kPropLookup};
}

std::vector<CellAnnotation> AnnotateRow(const RowContext &row,
                                        const ColumnClasses &classes,
                                        const std::set<size_t> &target_cols,
                                        AnnotationContext &ctx) {
  auto class_of = [&](size_t col) -> std::optional<EntityId> {
    auto it = classes.find(col);
    if (it == classes.end()) return std::nullopt;
    return it->second;
  };

  std::vector<CellAnnotation> out;
  std::optional<LinkedEntity> head;
  if (!row.items.empty() && !row.items[0].missing()) {
    head = ResolveHeadEntity(row.items[0].text(), class_of(0), ctx);
  }
  if (head && target_cols.count(0)) {
    out.push_back({row.table_id, row.row, 0, head->record.id, head->method});
  }
  HeadEntityContext context(
      row.row, head ? std::optional<EntityRecord>(head->record) : std::nullopt);

  for (size_t col : target_cols) {
    if (col == 0 || col >= row.items.size()) continue;
    const CellValue &cell = row.items[col];
    if (cell.missing()) continue;
    if (context.entity()) {
      auto m = context.Lookup(cell.text());
      if (m.kind == HeadEntityContext::MatchKind::kEntity) {
        out.push_back({row.table_id, row.row, col, *m.entity,
                       LinkMethod::kPropLookup});
        continue;
      }
      if (m.kind == HeadEntityContext::MatchKind::kLiteral) continue;
    }
    if (auto linked = LinkEntity(cell.text(), class_of(col), ctx)) {
      out.push_back({row.table_id, row.row, col, linked->record.id,
                     linked->method});
    }
  }
  return out;
}

std::map<size_t, std::set<size_t>> GroupTargetsByRow(
    const Table &table, std::span<const CellTarget> targets,
    Diagnostics &diagnostics) {
  std::map<size_t, std::set<size_t>> rows;
  for (const CellTarget &t : targets) {
    if (t.table_id != table.id()) continue;
    if (t.row >= table.rows() || t.col >= table.cols()) {
      diagnostics.Warn(Warning::kUnknownCell,
                       table.id() + " cell (" + std::to_string(t.row) + "," +
                           std::to_string(t.col) + ")");
      continue;
    }
    rows[t.row].insert(t.col);
  }
  return rows;
}

std::vector<CellAnnotation> AnnotateTableCea(const Table &table,
                                             std::span<const CellTarget> targets,
                                             const ColumnClasses &classes,
                                             AnnotationContext &ctx) {
  std::vector<CellAnnotation> out;
  for (const auto &[row, cols] : GroupTargetsByRow(table, targets, ctx.diagnostics)) {
    auto annotated = AnnotateRow(table.Row(row), classes, cols, ctx);
    out.insert(out.end(), annotated.begin(), annotated.end());
  }
  return out;
}

}  // namespace amalgam
