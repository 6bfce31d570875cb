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

#include "amalgam/annotation.h"

#include <stdexcept>

#include "amalgam/errors.h"

namespace amalgam {

std::optional<CandidateSet> SearchOrWarn(std::string_view label,
                                         AnnotationContext &ctx) {
  try {
    return ctx.kg.Search(label, ctx.limit);
  } catch (const RateLimited &e) {
    ctx.diagnostics.Warn(Warning::kRateLimited, e.what());
  } catch (const BackendUnavailable &e) {
    ctx.diagnostics.Warn(Warning::kBackendUnavailable, e.what());
  } catch (const std::invalid_argument &) {
    // Empty after normalization: nothing to look up.
  }
  return std::nullopt;
}

std::optional<std::string> BestCorrection(std::string_view label,
                                          AnnotationContext &ctx) {
  try {
    auto corrections = ctx.spell.Suggest(label, &ctx.kg, &ctx.diagnostics);
    if (corrections.empty()) return std::nullopt;
    return std::move(corrections.front().suggestion);
  } catch (const std::invalid_argument &) {
    return std::nullopt;
  }
}

}  // namespace amalgam
