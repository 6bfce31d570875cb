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

#include "amalgam/evaluator.h"

#include <charconv>
#include <cstdio>

#include "amalgam/errors.h"
#include "amalgam/kg.h"
#include "amalgam/table.h"

namespace amalgam {

namespace {

std::string_view Trim(std::string_view s) {
  const char *ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<uint64_t> ParseIndex(std::string_view s) {
  s = Trim(s);
  uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

std::optional<Task> ParseTask(std::string_view name) {
  if (name == "cta" || name == "CTA") return Task::kCta;
  if (name == "cea" || name == "CEA") return Task::kCea;
  return std::nullopt;
}

std::string_view TaskName(Task task) {
  return task == Task::kCta ? "CTA" : "CEA";
}

ScoreReport MakeReport(Task task, uint64_t targets, uint64_t submitted,
                       uint64_t correct) {
  ScoreReport r;
  r.task = task;
  r.targets = targets;
  r.submitted = submitted;
  r.correct = correct;
  r.precision = submitted == 0 ? 0.0 : static_cast<double>(correct) / submitted;
  r.recall = targets == 0 ? 0.0 : static_cast<double>(correct) / targets;
  double sum = r.precision + r.recall;
  r.f1 = sum == 0 ? 0.0 : 2 * r.precision * r.recall / sum;
  return r;
}

std::optional<std::string> NormalizeIri(std::string_view iri) {
  iri = Trim(iri);
  for (std::string_view prefix : {"http://www.wikidata.org/entity/",
                                  "https://www.wikidata.org/entity/"}) {
    if (iri.substr(0, prefix.size()) == prefix) {
      iri.remove_prefix(prefix.size());
      break;
    }
  }
  if (!EntityId::Parse(iri)) return std::nullopt;
  return std::string(iri);
}

AnnotationMap ParseAnnotations(std::string_view csv_text, Task task,
                               const std::string &source_name, bool is_gold) {
  const size_t id_fields = task == Task::kCta ? 2 : 3;
  AnnotationMap out;
  for (const CsvRecord &rec : ParseCsvWithLines(csv_text)) {
    if (rec.fields.size() != id_fields + 1) {
      throw MalformedRow(source_name, rec.line,
                         "expected " + std::to_string(id_fields + 1) +
                             " fields, got " + std::to_string(rec.fields.size()));
    }
    std::string key(Trim(rec.fields[0]));
    if (key.empty()) throw MalformedRow(source_name, rec.line, "empty table id");
    for (size_t i = 1; i < id_fields; ++i) {
      auto idx = ParseIndex(rec.fields[i]);
      if (!idx) {
        throw MalformedRow(source_name, rec.line,
                           "non-numeric index '" + rec.fields[i] + "'");
      }
      key += '\x1f';
      key += std::to_string(*idx);
    }
    std::string_view iri = Trim(rec.fields[id_fields]);
    if (iri.empty()) throw MalformedRow(source_name, rec.line, "empty IRI");
    auto id = NormalizeIri(iri);
    if (!id && is_gold) {
      throw MalformedRow(source_name, rec.line,
                         "unrecognized IRI '" + std::string(iri) + "'");
    }
    // An unrecognized predicted IRI can never be correct; keep it as is.
    bool inserted = out.emplace(key, id ? *id : std::string(iri)).second;
    if (!inserted) {
      std::string where = source_name + ":" + std::to_string(rec.line);
      if (is_gold) throw MalformedRow(source_name, rec.line, "duplicate gold key");
      throw DuplicatePrediction(where + ": duplicate prediction");
    }
  }
  return out;
}

ScoreReport Score(const AnnotationMap &predictions, const AnnotationMap &gold,
                  Task task) {
  uint64_t submitted = 0, correct = 0, ignored = 0;
  for (const auto &[key, id] : predictions) {
    auto it = gold.find(key);
    if (it == gold.end()) {
      ++ignored;
      continue;
    }
    ++submitted;
    if (it->second == id) ++correct;
  }
  ScoreReport r = MakeReport(task, gold.size(), submitted, correct);
  r.ignored = ignored;
  return r;
}

ScoreReport ScoreFiles(const std::filesystem::path &predictions,
                       const std::filesystem::path &gold, Task task) {
  AnnotationMap pred =
      ParseAnnotations(ReadFile(predictions), task, predictions.string(), false);
  AnnotationMap truth = ParseAnnotations(ReadFile(gold), task, gold.string(), true);
  return Score(pred, truth, task);
}

nlohmann::ordered_json ToJson(const ScoreReport &r) {
  return {{"task", std::string(TaskName(r.task))},
          {"targets", r.targets},
          {"submitted", r.submitted},
          {"correct", r.correct},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1}};
}

std::string FormatReport(const ScoreReport &r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s evaluation\n"
                "  targets    %llu\n"
                "  submitted  %llu\n"
                "  correct    %llu\n"
                "  ignored    %llu (not in gold)\n"
                "  precision  %.4f\n"
                "  recall     %.4f\n"
                "  F1         %.4f\n",
                std::string(TaskName(r.task)).c_str(),
                static_cast<unsigned long long>(r.targets),
                static_cast<unsigned long long>(r.submitted),
                static_cast<unsigned long long>(r.correct),
                static_cast<unsigned long long>(r.ignored), r.precision,
                r.recall, r.f1);
  return buf;
}

}  // namespace amalgam
