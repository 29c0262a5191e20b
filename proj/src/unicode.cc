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

#include "subpiece/unicode.h"

#include <algorithm>

#include "absl/status/status.h"
#include "fmt/format.h"

namespace subpiece {
namespace unicode {
namespace {

constexpr bool IsTrail(unsigned char c) { return (c & 0xC0) == 0x80; }

// Decodes one code point at `text[*pos]`; advances `*pos`. Returns false on
// malformed input.
bool DecodeOne(std::string_view text, size_t* pos, char32_t* out) {
  const auto* s = reinterpret_cast<const unsigned char*>(text.data());
  const size_t n = text.size();
  const size_t i = *pos;
  const unsigned char c = s[i];
  if (c < 0x80) {
    *out = c;
    *pos = i + 1;
    return true;
  }
  size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
    min = 0x80;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
    min = 0x800;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
    min = 0x10000;
  } else {
    return false;
  }
  if (i + len > n) return false;
  for (size_t k = 1; k < len; ++k) {
    if (!IsTrail(s[i + k])) return false;
    cp = (cp << 6) | (s[i + k] & 0x3F);
  }
  if (cp < min || !IsValidCodePoint(cp)) return false;
  *out = cp;
  *pos = i + len;
  return true;
}

}  // namespace

absl::StatusOr<std::u32string> DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    char32_t c = 0;
    if (!DecodeOne(text, &pos, &c)) {
      return absl::InvalidArgumentError(
          fmt::format("invalid UTF-8 sequence at byte offset {}", pos));
    }
    out.push_back(c);
  }
  return out;
}

bool IsStructurallyValidUtf8(std::string_view text) {
  size_t pos = 0;
  char32_t c = 0;
  while (pos < text.size()) {
    if (!DecodeOne(text, &pos, &c)) return false;
  }
  return true;
}

void AppendUtf8(char32_t c, std::string* out) {
  if (c < 0x80) {
    out->push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (c >> 6)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (c >> 12)));
    out->push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (c >> 18)));
    out->push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) AppendUtf8(c, &out);
  return out;
}

std::string EncodeUtf8(char32_t c) {
  std::string out;
  AppendUtf8(c, &out);
  return out;
}

std::vector<std::string_view> SplitChars(std::string_view text) {
  std::vector<std::string_view> chars;
  chars.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t len = std::min(
        OneCharLen(static_cast<unsigned char>(text[pos])), text.size() - pos);
    chars.push_back(text.substr(pos, len));
    pos += len;
  }
  return chars;
}

size_t CharCount(std::string_view text) {
  size_t count = 0;
  for (char c : text) {
    if (!IsTrail(static_cast<unsigned char>(c))) ++count;
  }
  return count;
}

std::string ReplaceAll(std::string_view text, std::string_view from,
                       std::string_view to) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (true) {
    const size_t hit = text.find(from, pos);
    if (hit == std::string_view::npos) break;
    out.append(text.substr(pos, hit - pos));
    out.append(to);
    pos = hit + from.size();
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace unicode
}  // namespace subpiece
