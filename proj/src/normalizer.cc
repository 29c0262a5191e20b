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

#include "subpiece/normalizer.h"

#include <utility>

#include <unordered_set>
#include "fmt/format.h"
#include "subpiece/string_util.h"
#include "subpiece/unicode.h"

namespace subpiece {
namespace normalizer {
extern const std::string_view kNfkcSubsetTsv;
}  // namespace normalizer

namespace {

// Parses "U+XXXX U+YYYY" into code points. Empty input yields an empty
// sequence.
absl::StatusOr<std::u32string> ParseCodePoints(std::string_view field,
                                               int line_no) {
  std::u32string out;
  if (field.empty()) return out;
  for (std::string_view token : SplitString(field, ' ')) {
    const bool well_formed = token.size() >= 3 && token.size() <= 8 &&
                             token[0] == 'U' && token[1] == '+';
    char32_t cp = 0;
    bool hex_ok = well_formed;
    for (size_t i = 2; hex_ok && i < token.size(); ++i) {
      const char c = token[i];
      int digit = -1;
      if (c >= '0' && c <= '9') digit = c - '0';
      if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
      if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
      if (digit < 0) hex_ok = false;
      cp = (cp << 4) | static_cast<char32_t>(digit);
    }
    if (!hex_ok) {
      return absl::InvalidArgumentError(fmt::format(
          "line {}: malformed code point token \"{}\"", line_no, token));
    }
    if (!unicode::IsValidCodePoint(cp)) {
      return absl::InvalidArgumentError(fmt::format(
          "line {}: \"{}\" is not a Unicode scalar value", line_no, token));
    }
    out.push_back(cp);
  }
  return out;
}

std::string FormatCodePoints(std::u32string_view cps) {
  std::string out;
  for (size_t i = 0; i < cps.size(); ++i) {
    if (i > 0) out.push_back(' ');
    fmt::format_to(std::back_inserter(out), "U+{:04X}", static_cast<uint32_t>(cps[i]));
  }
  return out;
}

}  // namespace

absl::StatusOr<std::vector<NormalizationRule>> ParseRulesTsv(
    std::string_view tsv) {
  std::vector<NormalizationRule> rules;
  std::unordered_set<std::u32string> seen;
  int line_no = 0;
  for (std::string_view line : SplitString(tsv, '\n')) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string_view> fields = SplitString(line, '\t');
    if (fields.size() != 2) {
      return absl::InvalidArgumentError(fmt::format(
          "line {}: expected exactly one tab separating source and target",
          line_no));
    }
    NormalizationRule rule;
    auto source = ParseCodePoints(fields[0], line_no);
    if (!source.ok()) return source.status();
    auto target = ParseCodePoints(fields[1], line_no);
    if (!target.ok()) return target.status();
    rule.source = *std::move(source);
    rule.target = *std::move(target);
    if (rule.source.empty()) {
      return absl::InvalidArgumentError(
          fmt::format("line {}: empty rule source", line_no));
    }
    if (rule.source.size() > kMaxRuleSourceLength) {
      return absl::OutOfRangeError(fmt::format(
          "line {}: rule source has {} code points, limit is {}", line_no,
          rule.source.size(), kMaxRuleSourceLength));
    }
    if (rule.target.size() > kMaxRuleTargetLength) {
      return absl::OutOfRangeError(fmt::format(
          "line {}: rule target has {} code points, limit is {}", line_no,
          rule.target.size(), kMaxRuleTargetLength));
    }
    if (!seen.insert(rule.source).second) {
      return absl::AlreadyExistsError(fmt::format(
          "line {}: duplicate rule source {}", line_no,
          FormatCodePoints(rule.source)));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string RulesToTsv(const std::vector<NormalizationRule>& rules) {
  std::string out;
  for (const auto& rule : rules) {
    out += FormatCodePoints(rule.source);
    out += '\t';
    out += FormatCodePoints(rule.target);
    out += '\n';
  }
  return out;
}

absl::StatusOr<std::vector<NormalizationRule>> BuiltinRules(
    std::string_view rule_name) {
  if (rule_name == kIdentityRuleName) return std::vector<NormalizationRule>{};
  if (rule_name == kNfkcSubsetRuleName) {
    return ParseRulesTsv(normalizer::kNfkcSubsetTsv);
  }
  return absl::NotFoundError(
      fmt::format("unknown normalization rule name \"{}\"", rule_name));
}

CharsMap::CharsMap() : accept_{-1} {}

int32_t CharsMap::Child(int32_t node, char32_t c) const {
  const auto it = edges_.find(EdgeKey(node, c));
  return it == edges_.end() ? -1 : it->second;
}

absl::StatusOr<CharsMap> CharsMap::Compile(
    const std::vector<NormalizationRule>& rules) {
  CharsMap map;
  for (const auto& rule : rules) {
    if (rule.source.empty() || rule.source.size() > kMaxRuleSourceLength) {
      return absl::InvalidArgumentError(fmt::format(
          "rule source {} has invalid length", FormatCodePoints(rule.source)));
    }
    int32_t node = 0;
    for (char32_t c : rule.source) {
      int32_t next = map.Child(node, c);
      if (next < 0) {
        next = static_cast<int32_t>(map.accept_.size());
        map.accept_.push_back(-1);
        map.edges_.emplace(EdgeKey(node, c), next);
      }
      node = next;
    }
    if (map.accept_[node] >= 0) {
      return absl::AlreadyExistsError(fmt::format(
          "duplicate rule source {}", FormatCodePoints(rule.source)));
    }
    map.accept_[node] = static_cast<int32_t>(map.targets_.size());
    map.targets_.push_back(rule.target);
  }
  return map;
}

const std::u32string* CharsMap::Lookup(std::u32string_view source) const {
  int32_t node = 0;
  for (char32_t c : source) {
    node = Child(node, c);
    if (node < 0) return nullptr;
  }
  if (source.empty() || accept_[node] < 0) return nullptr;
  return &targets_[accept_[node]];
}

size_t CharsMap::LongestMatch(std::u32string_view input,
                              const std::u32string** target) const {
  size_t best = 0;
  *target = nullptr;
  if (targets_.empty()) return 0;
  int32_t node = 0;
  for (size_t i = 0; i < input.size() && i < kMaxRuleSourceLength; ++i) {
    node = Child(node, input[i]);
    if (node < 0) break;
    if (accept_[node] >= 0) {
      best = i + 1;
      *target = &targets_[accept_[node]];
    }
  }
  return best;
}

std::u32string Normalize(std::u32string_view text, const NormalizerSpec& spec,
                         const CharsMap& map) {
  std::u32string rewritten;
  rewritten.reserve(text.size());
  for (size_t pos = 0; pos < text.size();) {
    const std::u32string* target = nullptr;
    const size_t len = map.LongestMatch(text.substr(pos), &target);
    if (len > 0) {
      rewritten.append(*target);
      pos += len;
    } else {
      rewritten.push_back(text[pos++]);
    }
  }

  std::u32string out;
  out.reserve(rewritten.size() + 1);
  if (spec.remove_extra_whitespaces) {
    bool pending_space = false;
    for (char32_t c : rewritten) {
      if (IsNormalizerWhitespace(c)) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(U' ');
      pending_space = false;
      out.push_back(c);
    }
  } else {
    out = std::move(rewritten);
  }

  if (spec.add_dummy_prefix && !out.empty()) out.insert(out.begin(), U' ');

  if (spec.escape_whitespaces) {
    for (char32_t& c : out) {
      if (c == U' ') c = kSpaceSymbol;
    }
  }
  return out;
}

absl::StatusOr<Normalizer> Normalizer::Create(NormalizerSpec spec) {
  if (spec.rules.empty() && spec.rule_name != kUserRuleName) {
    auto rules = BuiltinRules(spec.rule_name);
    if (!rules.ok()) return rules.status();
    spec.rules = *std::move(rules);
  }
  return CreateMaterialized(std::move(spec));
}

absl::StatusOr<Normalizer> Normalizer::CreateMaterialized(NormalizerSpec spec) {
  auto map = CharsMap::Compile(spec.rules);
  if (!map.ok()) return map.status();
  return Normalizer(std::move(spec), *std::move(map));
}

absl::StatusOr<std::string> Normalizer::Normalize(std::string_view utf8) const {
  auto decoded = unicode::DecodeUtf8(utf8);
  if (!decoded.ok()) return decoded.status();
  return unicode::EncodeUtf8(subpiece::Normalize(*decoded, spec_, map_));
}

}  // namespace subpiece
