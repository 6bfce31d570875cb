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

// Precision / recall / F1 scoring of CTA and CEA submissions.
//
// Files use the submission shapes: CTA rows are (table, col, iri) and CEA
// rows are (table, row, col, iri). Table ids match case-sensitively, row
// and column ids numerically. A prediction is correct when its entity id
// equals the gold one; full IRIs and bare Q-ids are both accepted.
// Predictions for keys that are not in the gold file are ignored.

#ifndef AMALGAM_EVALUATOR_H_
#define AMALGAM_EVALUATOR_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace amalgam {

enum class Task { kCta, kCea };

std::optional<Task> ParseTask(std::string_view name);
std::string_view TaskName(Task task);

struct ScoreReport {
  Task task = Task::kCea;
  uint64_t targets = 0;
  uint64_t submitted = 0;
  uint64_t correct = 0;
  uint64_t ignored = 0;  // Predictions for keys outside the gold set.
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Fills precision, recall and F1 with their zero guards.
ScoreReport MakeReport(Task task, uint64_t targets, uint64_t submitted,
                       uint64_t correct);

// "Q42" for "Q42", "http://www.wikidata.org/entity/Q42" or the https form,
// after trimming; nullopt otherwise.
std::optional<std::string> NormalizeIri(std::string_view iri);

// Key -> normalized id. Throws MalformedRow and, when `unique` is set,
// DuplicatePrediction.
using AnnotationMap = std::map<std::string, std::string>;
AnnotationMap ParseAnnotations(std::string_view csv_text, Task task,
                               const std::string &source_name, bool is_gold);

ScoreReport Score(const AnnotationMap &predictions, const AnnotationMap &gold,
                  Task task);

// Reads both files and scores them. Throws IoError, MalformedRow or
// DuplicatePrediction.
ScoreReport ScoreFiles(const std::filesystem::path &predictions,
                       const std::filesystem::path &gold, Task task);

// {"task","targets","submitted","correct","precision","recall","f1"}
nlohmann::ordered_json ToJson(const ScoreReport &report);
std::string FormatReport(const ScoreReport &report);

}  // namespace amalgam

#endif  // AMALGAM_EVALUATOR_H_
