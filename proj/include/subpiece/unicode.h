// Copyright 2026 The Subpiece Authors.
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

#ifndef SUBPIECE_UNICODE_H_
#define SUBPIECE_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace subpiece {

// The whitespace meta symbol U+2581, and its UTF-8 encoding.
inline constexpr char32_t kSpaceSymbol = 0x2581;
inline constexpr std::string_view kSpaceSymbolUtf8 = "\xe2\x96\x81";

inline constexpr char32_t kMaxCodePoint = 0x10FFFF;

namespace unicode {

// True if `c` is a Unicode scalar value (not a surrogate, <= U+10FFFF).
constexpr bool IsValidCodePoint(char32_t c) {
  return c <= kMaxCodePoint && (c < 0xD800 || c > 0xDFFF);
}

// Length in bytes of the UTF-8 sequence introduced by the lead byte `c`.
// Returns 1 for stray continuation bytes so callers always make progress.
constexpr size_t OneCharLen(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;
}

// Strict decoder: rejects overlong forms, surrogates and truncated input.
absl::StatusOr<std::u32string> DecodeUtf8(std::string_view text);

bool IsStructurallyValidUtf8(std::string_view text);

void AppendUtf8(char32_t c, std::string* out);
std::string EncodeUtf8(std::u32string_view text);
std::string EncodeUtf8(char32_t c);

// Splits valid UTF-8 into one view per code point.
std::vector<std::string_view> SplitChars(std::string_view text);

// Number of code points in valid UTF-8.
size_t CharCount(std::string_view text);

// Replaces every occurrence of `from` with `to`.
std::string ReplaceAll(std::string_view text, std::string_view from,
                       std::string_view to);

}  // namespace unicode
}  // namespace subpiece

#endif  // SUBPIECE_UNICODE_H_
