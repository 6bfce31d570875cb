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

#include "amalgam/spellcheck.h"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "amalgam/errors.h"
#include "amalgam/table.h"
#include "amalgam/text.h"

namespace amalgam {

namespace {

// Below this many terms the thread start-up costs more than the scan.
constexpr size_t kParallelScanThreshold = 4096;

struct Block {
  size_t a_start, b_start, size;
};

// Longest common substring of a[alo,ahi) and b[blo,bhi). Scans end
// positions in order and only replaces the best on a strictly longer match,
// so ties go to the earliest block in `a`, then in `b`.
Block LongestMatch(std::u32string_view a, size_t alo, size_t ahi,
                   std::u32string_view b, size_t blo, size_t bhi,
                   std::vector<size_t> &prev, std::vector<size_t> &cur) {
  Block best{alo, blo, 0};
  const size_t width = bhi - blo;
  prev.assign(width + 1, 0);
  cur.assign(width + 1, 0);
  for (size_t i = alo; i < ahi; ++i) {
    for (size_t j = blo; j < bhi; ++j) {
      size_t k = a[i] == b[j] ? prev[j - blo] + 1 : 0;
      cur[j - blo + 1] = k;
      if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
    }
    std::swap(prev, cur);
  }
  return best;
}

void SortMatches(std::vector<TermMatch> &matches) {
  std::sort(matches.begin(), matches.end(),
            [](const TermMatch &x, const TermMatch &y) {
              if (x.distance != y.distance) return x.distance < y.distance;
              return x.term < y.term;
            });
}

}  // namespace

size_t MatchingCharacters(std::u32string_view a, std::u32string_view b) {
  struct Range {
    size_t alo, ahi, blo, bhi;
  };
  std::vector<Range> todo{{0, a.size(), 0, b.size()}};
  std::vector<size_t> prev, cur;
  size_t total = 0;
  while (!todo.empty()) {
    Range r = todo.back();
    todo.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    Block m = LongestMatch(a, r.alo, r.ahi, b, r.blo, r.bhi, prev, cur);
    if (m.size == 0) continue;
    total += m.size;
    todo.push_back({r.alo, m.a_start, r.blo, m.b_start});
    todo.push_back({m.a_start + m.size, r.ahi, m.b_start + m.size, r.bhi});
  }
  return total;
}

int FuzzyRatio(std::string_view a, std::string_view b) {
  const std::u32string fa = FoldedCodePoints(a);
  const std::u32string fb = FoldedCodePoints(b);
  const uint64_t den = fa.size() + fb.size();
  if (den == 0) return 100;
  const uint64_t num = 200 * MatchingCharacters(fa, fb);
  uint64_t q = num / den;
  const uint64_t twice_rem = 2 * (num % den);
  if (twice_rem > den || (twice_rem == den && q % 2 == 1)) ++q;
  return static_cast<int>(q);
}

int BoundedEditDistance(std::u32string_view a, std::u32string_view b,
                        int bound) {
  const size_t n = a.size(), m = b.size();
  const size_t diff = n > m ? n - m : m - n;
  if (bound < 0) return 0;
  if (diff > static_cast<size_t>(bound)) return bound + 1;

  std::vector<int> before(m + 1), prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    int row_min = cur[0];
    for (size_t j = 1; j <= m; ++j) {
      int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      int d = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d = std::min(d, before[j - 2] + 1);
      }
      cur[j] = d;
      row_min = std::min(row_min, d);
    }
    // A transposition can reach back two rows, so stop only when both
    // of the last two rows are already over the bound.
    if (row_min > bound &&
        *std::min_element(prev.begin(), prev.end()) > bound) {
      return bound + 1;
    }
    std::swap(before, prev);
    std::swap(prev, cur);
  }
  return std::min(prev[m], bound + 1);
}

TermDictionary::TermDictionary(const std::vector<std::string> &terms) {
  for (const auto &t : terms) Add(t);
}

TermDictionary TermDictionary::FromWordList(const std::filesystem::path &path) {
  TermDictionary dict;
  dict.AddWordList(path);
  return dict;
}

void TermDictionary::AddWordList(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open word list " + path.string());
  std::string line;
  while (std::getline(in, line)) Add(line);
  if (in.bad()) throw IoError("cannot read word list " + path.string());
}

void TermDictionary::Add(std::string_view term) {
  std::string text = NormalizeCell(term).text();
  if (text.empty()) return;
  if (!seen_.insert(text).second) return;
  terms_.push_back({text, FoldedCodePoints(text)});
}

std::vector<TermMatch> TermDictionary::NearestSerial(std::string_view query,
                                                     int max_distance) const {
  const std::u32string q = FoldedCodePoints(NormalizeCell(query).text());
  std::vector<TermMatch> out;
  for (const Entry &e : terms_) {
    int d = BoundedEditDistance(q, e.folded, max_distance);
    if (d <= max_distance) out.push_back({e.term, d});
  }
  SortMatches(out);
  return out;
}

std::vector<TermMatch> TermDictionary::Nearest(std::string_view query,
                                               int max_distance) const {
  const std::u32string q = FoldedCodePoints(NormalizeCell(query).text());
  std::vector<TermMatch> out;
  const auto count = static_cast<std::ptrdiff_t>(terms_.size());
#pragma omp parallel if (terms_.size() >= kParallelScanThreshold)
  {
    std::vector<TermMatch> local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const Entry &e = terms_[static_cast<size_t>(i)];
      int d = BoundedEditDistance(q, e.folded, max_distance);
      if (d <= max_distance) local.push_back({e.term, d});
    }
#pragma omp critical(amalgam_nearest_merge)
    out.insert(out.end(), local.begin(), local.end());
  }
  SortMatches(out);
  return out;
}

SpellChecker::SpellChecker(TermDictionary dictionary, SpellOptions options)
    : dictionary_(std::move(dictionary)), options_(options) {
  if (options_.threshold < 0 || options_.threshold > 100) {
    throw std::invalid_argument("fuzzy threshold must be in [0, 100]");
  }
}

std::vector<Correction> SpellChecker::Suggest(std::string_view label,
                                              KnowledgeGraph *kg,
                                              Diagnostics *diagnostics) const {
  const std::string original = NormalizeCell(label).text();
  if (original.empty()) {
    throw std::invalid_argument("cannot spell-check an empty label");
  }
  const std::u32string folded = FoldedCodePoints(original);
  if (folded.size() > options_.max_length) return {};

  std::vector<std::pair<std::string, Correction::Source>> raw;
  if (kg != nullptr && options_.kg_suggestions > 0) {
    try {
      CandidateSet set = kg->Search(
          original, std::min(options_.kg_suggestions, KnowledgeGraph::kMaxLimit));
      for (const auto &c : set.candidates) {
        raw.emplace_back(c.label, Correction::Source::kKgSuggest);
      }
    } catch (const BackendUnavailable &e) {
      if (diagnostics != nullptr) {
        diagnostics->Warn(Warning::kSpellBackendDegraded, e.what());
      }
    }
  }
  for (auto &m : dictionary_.Nearest(original, options_.max_edit_distance)) {
    raw.emplace_back(std::move(m.term), Correction::Source::kEditDistance);
  }

  std::vector<Correction> out;
  std::unordered_set<std::string> seen;
  for (auto &[suggestion, source] : raw) {
    if (FoldCase(DecodeUtf8(suggestion)) == folded) continue;
    if (!seen.insert(suggestion).second) continue;
    int ratio = FuzzyRatio(original, suggestion);
    if (ratio > options_.threshold) {
      out.push_back({original, std::move(suggestion), ratio, source});
    }
  }
  std::sort(out.begin(), out.end(), [](const Correction &x, const Correction &y) {
    if (x.ratio != y.ratio) return x.ratio > y.ratio;
    return x.suggestion < y.suggestion;
  });
  return out;
}

}  // namespace amalgam
