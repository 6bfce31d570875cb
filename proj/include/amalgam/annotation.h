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

#ifndef AMALGAM_ANNOTATION_H_
#define AMALGAM_ANNOTATION_H_

#include <optional>
#include <string>
#include <string_view>

#include "amalgam/diagnostics.h"
#include "amalgam/kg.h"
#include "amalgam/spellcheck.h"

namespace amalgam {

// Everything an annotator needs besides the table. Shared by all workers;
// each member is thread-safe.
struct AnnotationContext {
  KnowledgeGraph &kg;
  const SpellChecker &spell;
  Diagnostics &diagnostics;
  int limit = 10;
};

// Search that never throws: backend failures are counted and read as "no
// result" (nullopt), as is a label that normalizes to nothing.
std::optional<CandidateSet> SearchOrWarn(std::string_view label,
                                         AnnotationContext &ctx);

// The top-ranked spelling correction for `label`, if any survives the
// fuzzy filter.
std::optional<std::string> BestCorrection(std::string_view label,
                                          AnnotationContext &ctx);

}  // namespace amalgam

#endif  // AMALGAM_ANNOTATION_H_
