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

#include "corpus_util.h"

#include <algorithm>

#include <unordered_map>
#include "absl/status/status.h"
#include "fmt/format.h"
#include "subpiece/unicode.h"

namespace subpiece {
namespace internal {

absl::StatusOr<CharInventory> CollectChars(
    const std::vector<std::string>& sentences, double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0)) {
    return absl::InvalidArgumentError(fmt::format(
        "character_coverage must be in (0, 1], got {:g}", coverage));
  }
  std::unordered_map<std::string_view, int64_t> counts;
  int64_t total = 0;
  for (const auto& sentence : sentences) {
    if (!unicode::IsStructurallyValidUtf8(sentence)) {
      return absl::InvalidArgumentError("training sentence is not valid UTF-8");
    }
    for (std::string_view c : unicode::SplitChars(sentence)) {
      ++counts[c];
      ++total;
    }
  }
  if (total == 0) {
    return absl::InvalidArgumentError("training corpus is empty");
  }
  std::vector<std::pair<std::string, int64_t>> sorted;
  sorted.reserve(counts.size());
  for (const auto& [c, n] : counts) sorted.emplace_back(std::string(c), n);
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  CharInventory inventory;
  const double required = coverage * static_cast<double>(total);
  int64_t covered = 0;
  for (auto& entry : sorted) {
    if (static_cast<double>(covered) >= required) break;
    covered += entry.second;
    inventory.retained.insert(entry.first);
    inventory.chars.push_back(std::move(entry));
  }
  return inventory;
}

std::vector<std::string_view> SplitFragments(std::string_view sentence,
                                             const CharInventory& inventory,
                                             bool split_at_space_symbol) {
  std::vector<std::string_view> fragments;
  size_t begin = 0;
  size_t pos = 0;
  auto flush = [&](size_t end) {
    if (end > begin) fragments.push_back(sentence.substr(begin, end - begin));
  };
  while (pos < sentence.size()) {
    const size_t len = std::min(
        unicode::OneCharLen(static_cast<unsigned char>(sentence[pos])),
        sentence.size() - pos);
    const std::string_view c = sentence.substr(pos, len);
    if (!inventory.retained.contains(c)) {
      flush(pos);
      begin = pos + len;
    } else if (split_at_space_symbol && c == kSpaceSymbolUtf8) {
      flush(pos);
      begin = pos;
    }
    pos += len;
  }
  flush(sentence.size());
  return fragments;
}

}  // namespace internal
}  // namespace subpiece
