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

// Corpus helpers shared by the trainers.

#ifndef SUBPIECE_SRC_CORPUS_UTIL_H_
#define SUBPIECE_SRC_CORPUS_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subpiece/string_util.h"
#include "absl/status/statusor.h"

namespace subpiece {
namespace internal {

struct CharInventory {
  // Retained characters, most frequent first (ties by byte order).
  std::vector<std::pair<std::string, int64_t>> chars;
  StringSet retained;
};

// Counts characters and keeps the most frequent ones until `coverage` of the
// total character mass is reached. Fails on an empty corpus.
absl::StatusOr<CharInventory> CollectChars(
    const std::vector<std::string>& sentences, double coverage);

// Splits a sentence into maximal runs of retained characters. When
// `split_at_space_symbol` is set, every U+2581 also starts a new fragment.
std::vector<std::string_view> SplitFragments(std::string_view sentence,
                                             const CharInventory& inventory,
                                             bool split_at_space_symbol);

}  // namespace internal
}  // namespace subpiece

#endif  // SUBPIECE_SRC_CORPUS_UTIL_H_
