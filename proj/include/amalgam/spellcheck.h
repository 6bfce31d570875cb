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

// Spelling correction for labels that fail lookup.
//
// Suggestions come from two places: labels the knowledge graph returns when
// searching the raw string, and a dictionary of known labels within a small
// edit distance. Every suggestion is scored with FuzzyRatio and only those
// strictly above the threshold (90 by default) survive.

#ifndef AMALGAM_SPELLCHECK_H_
#define AMALGAM_SPELLCHECK_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "amalgam/diagnostics.h"
#include "amalgam/kg.h"

namespace amalgam {

// Total length of the matching blocks found by Ratcliff/Obershelp: take the
// longest common substring (earliest in `a`, then earliest in `b` on ties),
// then recurse on the pieces to its left and to its right.
size_t MatchingCharacters(std::u32string_view a, std::u32string_view b);

// round(200 * M / (|a| + |b|)) over case-folded code points, where M is
// MatchingCharacters. Rounds half to even. Two empty strings score 100.
int FuzzyRatio(std::string_view a, std::string_view b);

// Optimal-string-alignment distance (adjacent transposition costs 1), or
// `bound + 1` as soon as the distance is known to exceed `bound`.
int BoundedEditDistance(std::u32string_view a, std::u32string_view b,
                        int bound);

struct TermMatch {
  std::string term;
  int distance = 0;
  bool operator==(const TermMatch &) const = default;
};

// Known labels, matched case-insensitively by edit distance.
class TermDictionary {
 public:
  TermDictionary() = default;
  explicit TermDictionary(const std::vector<std::string> &terms);

  // One term per line, UTF-8. Throws IoError.
  static TermDictionary FromWordList(const std::filesystem::path &path);

  void Add(std::string_view term);
  // Adds one term per line. Throws IoError.
  void AddWordList(const std::filesystem::path &path);
  size_t size() const { return terms_.size(); }

  // Terms within `max_distance` of `query`, ordered by distance then term.
  // The parallel version splits the scan across OpenMP threads and returns
  // the same list as the serial one.
  std::vector<TermMatch> Nearest(std::string_view query, int max_distance) const;
  std::vector<TermMatch> NearestSerial(std::string_view query,
                                       int max_distance) const;

 private:
  struct Entry {
    std::string term;
    std::u32string folded;
  };
  std::vector<Entry> terms_;
  std::unordered_set<std::string> seen_;
};

struct Correction {
  enum class Source { kKgSuggest, kEditDistance };

  std::string original;
  std::string suggestion;
  int ratio = 0;
  Source source = Source::kEditDistance;

  bool operator==(const Correction &) const = default;
};

struct SpellOptions {
  int threshold = 90;
  int max_edit_distance = 2;
  int kg_suggestions = 10;
  // Longer strings are not entity labels; they are never corrected.
  size_t max_length = 256;
};

class SpellChecker {
 public:
  explicit SpellChecker(TermDictionary dictionary, SpellOptions options = {});

  // Corrections with ratio > threshold, best first (ratio descending, then
  // suggestion). `kg` may be null. A failing backend degrades to dictionary
  // suggestions and is counted in `diagnostics`.
  std::vector<Correction> Suggest(std::string_view label, KnowledgeGraph *kg,
                                  Diagnostics *diagnostics = nullptr) const;

  const SpellOptions &options() const { return options_; }
  const TermDictionary &dictionary() const { return dictionary_; }

 private:
  TermDictionary dictionary_;
  SpellOptions options_;
};

}  // namespace amalgam

#endif  // AMALGAM_SPELLCHECK_H_
