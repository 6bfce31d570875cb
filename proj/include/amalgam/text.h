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

// UTF-8 helpers shared by table loading, lookup and string matching.

#ifndef AMALGAM_TEXT_H_
#define AMALGAM_TEXT_H_

#include <string>
#include <string_view>

namespace amalgam {

constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes UTF-8. Invalid or truncated sequences, overlong forms and
// surrogates each become one U+FFFD; decoding never fails.
std::u32string DecodeUtf8(std::string_view bytes);

std::string EncodeUtf8(std::u32string_view text);

// Re-encodes `bytes` so the result is valid UTF-8.
inline std::string SanitizeUtf8(std::string_view bytes) {
  return EncodeUtf8(DecodeUtf8(bytes));
}

// Simple one-to-one lowercase mapping covering ASCII, Latin-1, Latin
// Extended-A, Greek and Cyrillic. Other code points are returned unchanged.
char32_t FoldCase(char32_t c);

std::u32string FoldCase(std::u32string_view text);

// Decodes and case-folds in one step.
std::u32string FoldedCodePoints(std::string_view utf8);

// Case-folded UTF-8, used as a lookup key.
std::string FoldedKey(std::string_view utf8);

bool IsControl(char32_t c);
bool IsSpace(char32_t c);

}  // namespace amalgam

#endif  // AMALGAM_TEXT_H_
