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

#ifndef SUBPIECE_NORMALIZER_H_
#define SUBPIECE_NORMALIZER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace subpiece {

// Longest rule source accepted by the TSV parser and the compiler.
inline constexpr size_t kMaxRuleSourceLength = 16;
inline constexpr size_t kMaxRuleTargetLength = 16;

// Names of the bundled rule sets.
inline constexpr std::string_view kIdentityRuleName = "identity";
inline constexpr std::string_view kNfkcSubsetRuleName = "nfkc_subset";
// rule_name recorded when rules come from a user supplied TSV file.
inline constexpr std::string_view kUserRuleName = "user_defined";

struct NormalizationRule {
  std::u32string source;
  std::u32string target;

  friend bool operator==(const NormalizationRule&,
                         const NormalizationRule&) = default;
};

// The preprocessing contract stored in every model.
struct NormalizerSpec {
  std::string rule_name = std::string(kNfkcSubsetRuleName);
  std::vector<NormalizationRule> rules;
  bool add_dummy_prefix = true;
  bool remove_extra_whitespaces = true;
  bool escape_whitespaces = true;

  friend bool operator==(const NormalizerSpec&,
                         const NormalizerSpec&) = default;
};

// Parses the rule TSV format:
//
//   # comment
//   U+41 U+302 U+300<TAB>U+1EA6
//
// Blank lines and lines starting with '#' are skipped. The target may be
// empty, which makes the rule a deletion.
absl::StatusOr<std::vector<NormalizationRule>> ParseRulesTsv(
    std::string_view tsv);

// Serializes rules back into the TSV format accepted by ParseRulesTsv.
std::string RulesToTsv(const std::vector<NormalizationRule>& rules);

// Returns the rules of a bundled rule set ("identity" or "nfkc_subset").
absl::StatusOr<std::vector<NormalizationRule>> BuiltinRules(
    std::string_view rule_name);

// String-to-string rewrite table compiled into a prefix tree over code points.
class CharsMap {
 public:
  CharsMap();

  static absl::StatusOr<CharsMap> Compile(
      const std::vector<NormalizationRule>& rules);

  // Exact lookup of a rule source. Returns nullptr if no rule has `source`.
  const std::u32string* Lookup(std::u32string_view source) const;

  // Finds the longest rule source that is a prefix of `input`. Returns its
  // length in code points (0 if none) and stores the target in `*target`.
  size_t LongestMatch(std::u32string_view input,
                      const std::u32string** target) const;

  size_t num_rules() const { return targets_.size(); }
  size_t num_nodes() const { return accept_.size(); }

 private:
  static uint64_t EdgeKey(int32_t node, char32_t c) {
    return (static_cast<uint64_t>(node) << 21) | c;
  }
  int32_t Child(int32_t node, char32_t c) const;

  // Node 0 is the root; accept_[n] indexes targets_ or is -1.
  std::vector<int32_t> accept_;
  absl::flat_hash_map<uint64_t, int32_t> edges_;
  std::vector<std::u32string> targets_;
};

// Applies one left-to-right leftmost-longest rewrite pass, then the
// whitespace steps of `spec` in order: trim and collapse, dummy prefix,
// escape U+0020 as U+2581.
std::u32string Normalize(std::u32string_view text, const NormalizerSpec& spec,
                         const CharsMap& map);

// Whitespace class used for trimming and collapsing.
constexpr bool IsNormalizerWhitespace(char32_t c) {
  return c == 0x20 || c == 0x09 || c == 0x0A || c == 0x0D;
}

// Owns a spec together with its compiled map and works on UTF-8 strings.
class Normalizer {
 public:
  // Materializes the rules named by spec.rule_name if spec.rules is empty,
  // then compiles them.
  static absl::StatusOr<Normalizer> Create(NormalizerSpec spec);

  // Compiles exactly spec.rules, never consulting the bundled rule sets.
  // Used when loading models.
  static absl::StatusOr<Normalizer> CreateMaterialized(NormalizerSpec spec);

  // Rejects invalid UTF-8 with InvalidArgument.
  absl::StatusOr<std::string> Normalize(std::string_view utf8) const;

  const NormalizerSpec& spec() const { return spec_; }
  const CharsMap& chars_map() const { return map_; }

 private:
  Normalizer(NormalizerSpec spec, CharsMap map)
      : spec_(std::move(spec)), map_(std::move(map)) {}

  NormalizerSpec spec_;
  CharsMap map_;
};

}  // namespace subpiece

#endif  // SUBPIECE_NORMALIZER_H_
