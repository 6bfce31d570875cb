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

#include "amalgam/diagnostics.h"

#include <iostream>

namespace amalgam {

std::string_view WarningName(Warning w) {
  switch (w) {
    case Warning::kBackendUnavailable: return "backend_unavailable";
    case Warning::kRateLimited: return "rate_limited";
    case Warning::kSpellBackendDegraded: return "spell_backend_degraded";
    case Warning::kUnknownColumn: return "unknown_column";
    case Warning::kUnknownCell: return "unknown_cell";
    case Warning::kUnknownTable: return "unknown_table";
    case Warning::kEmptyTable: return "empty_table";
    case Warning::kUnreadableTable: return "unreadable_table";
    case Warning::kCacheCorrupt: return "cache_corrupt";
    case Warning::kCacheWriteFailed: return "cache_write_failed";
    case Warning::kCount: break;
  }
  return "unknown";
}

void Diagnostics::Warn(Warning w, std::string message) {
  counts_[static_cast<size_t>(w)].fetch_add(1);
  if (message.empty()) return;
  std::string line = std::string(WarningName(w)) + ": " + message;
  std::lock_guard<std::mutex> lock(mu_);
  if (verbose_) std::cerr << "warning: " << line << "\n";
  if (messages_.size() < kMaxMessages) messages_.push_back(std::move(line));
}

uint64_t Diagnostics::total() const {
  uint64_t sum = 0;
  for (const auto &c : counts_) sum += c.load();
  return sum;
}

std::map<std::string, uint64_t> Diagnostics::Totals() const {
  std::map<std::string, uint64_t> out;
  for (size_t i = 0; i < counts_.size(); ++i) {
    out[std::string(WarningName(static_cast<Warning>(i)))] = counts_[i].load();
  }
  return out;
}

std::vector<std::string> Diagnostics::messages() const {
  std::lock_guard<std::mutex> lock(mu_);
  return messages_;
}

}  // namespace amalgam
