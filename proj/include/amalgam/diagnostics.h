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

#ifndef AMALGAM_DIAGNOSTICS_H_
#define AMALGAM_DIAGNOSTICS_H_

#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace amalgam {

enum class Warning {
  kBackendUnavailable,
  kRateLimited,
  kSpellBackendDegraded,
  kUnknownColumn,
  kUnknownCell,
  kUnknownTable,
  kEmptyTable,
  kUnreadableTable,
  kCacheCorrupt,
  kCacheWriteFailed,
  kCount,
};

std::string_view WarningName(Warning w);

// Thread-safe warning counters plus a bounded log of messages. Every warning
// raised by the pipeline goes through here so the run manifest can report
// complete totals.
class Diagnostics {
 public:
  static constexpr size_t kMaxMessages = 1000;

  void Warn(Warning w, std::string message = {});

  uint64_t count(Warning w) const {
    return counts_[static_cast<size_t>(w)].load();
  }
  uint64_t total() const;

  // Name -> count for every warning kind, zeros included.
  std::map<std::string, uint64_t> Totals() const;
  std::vector<std::string> messages() const;

  // Echo messages to stderr as they arrive.
  void set_verbose(bool verbose) { verbose_ = verbose; }

 private:
  std::array<std::atomic<uint64_t>, static_cast<size_t>(Warning::kCount)>
      counts_{};
  mutable std::mutex mu_;
  std::vector<std::string> messages_;
  bool verbose_ = false;
};

}  // namespace amalgam

#endif  // AMALGAM_DIAGNOSTICS_H_
