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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "subpiece/random.h"
#include "subpiece/unicode.h"

namespace subpiece {
namespace {

std::string Utf8(const std::u32string& s) { return unicode::EncodeUtf8(s); }

TEST(ParseRulesTsv, FigureTwoRule) {
  auto rules = ParseRulesTsv("U+41 U+302 U+300\tU+1EA6");
  ASSERT_TRUE(rules.ok()) << rules.status();
  ASSERT_EQ(rules->size(), 1u);
  EXPECT_EQ((*rules)[0].source, (std::u32string{0x41, 0x302, 0x300}));
  EXPECT_EQ((*rules)[0].target, std::u32string{0x1EA6});
}

TEST(ParseRulesTsv, EmptyDocument) {
  auto rules = ParseRulesTsv("");
  ASSERT_TRUE(rules.ok());
  EXPECT_TRUE(rules->empty());
}

TEST(ParseRulesTsv, CommentsBlankLinesAndDeletion) {
  auto rules = ParseRulesTsv("# comment\n\nU+61\t\nU+62\tU+10FFFF\n");
  ASSERT_TRUE(rules.ok()) << rules.status();
  ASSERT_EQ(rules->size(), 2u);
  EXPECT_TRUE((*rules)[0].target.empty());
  EXPECT_EQ((*rules)[1].target, std::u32string{0x10FFFF});
}

TEST(ParseRulesTsv, MalformedTokenReportsLine) {
  auto rules = ParseRulesTsv("U+41\tU+42\nU+4G\tU+43\n");
  ASSERT_FALSE(rules.ok());
  EXPECT_TRUE(absl::IsInvalidArgument(rules.status()));
  EXPECT_NE(std::string(rules.status().message()).find("line 2"),
            std::string::npos)
      << rules.status();
}

TEST(ParseRulesTsv, RejectsBadShapes) {
  for (const char* doc : {"U+41", "U+41\tU+42\tU+43", "U+41  U+42\tU+43",
                          "U+1234567\tU+41", "\tU+41", "U+D800\tU+41",
                          "U+110000\tU+41", "41\t42"}) {
    EXPECT_FALSE(ParseRulesTsv(doc).ok()) << doc;
  }
}

TEST(ParseRulesTsv, DuplicateSource) {
  auto rules = ParseRulesTsv("U+41\tU+42\nU+41\tU+43\n");
  ASSERT_FALSE(rules.ok());
  EXPECT_TRUE(absl::IsAlreadyExists(rules.status())) << rules.status();
}

TEST(ParseRulesTsv, SourceLengthLimit) {
  std::string ok_source, long_source;
  for (int i = 0; i < 16; ++i) ok_source += (i ? " " : "") + std::string("U+61");
  long_source = ok_source + " U+61";
  EXPECT_TRUE(ParseRulesTsv(ok_source + "\tU+62").ok());
  auto rules = ParseRulesTsv(long_source + "\tU+62");
  ASSERT_FALSE(rules.ok());
  EXPECT_TRUE(absl::IsOutOfRange(rules.status())) << rules.status();
}

TEST(ParseRulesTsv, RoundTripsThroughTsv) {
  auto builtin = BuiltinRules("nfkc_subset");
  ASSERT_TRUE(builtin.ok());
  auto reparsed = ParseRulesTsv(RulesToTsv(*builtin));
  ASSERT_TRUE(reparsed.ok()) << reparsed.status();
  EXPECT_EQ(*reparsed, *builtin);
}

TEST(BuiltinRules, Names) {
  auto identity = BuiltinRules("identity");
  ASSERT_TRUE(identity.ok());
  EXPECT_TRUE(identity->empty());
  auto subset = BuiltinRules("nfkc_subset");
  ASSERT_TRUE(subset.ok());
  EXPECT_GT(subset->size(), 100u);
  EXPECT_TRUE(absl::IsNotFound(BuiltinRules("nfkc").status()));
}

TEST(CharsMap, SingleEdge) {
  auto map = CharsMap::Compile({{U"A", U"a"}});
  ASSERT_TRUE(map.ok());
  EXPECT_EQ(map->num_nodes(), 2u);
  ASSERT_NE(map->Lookup(U"A"), nullptr);
  EXPECT_EQ(*map->Lookup(U"A"), U"a");
  EXPECT_EQ(map->Lookup(U"B"), nullptr);
  EXPECT_EQ(map->Lookup(U"AA"), nullptr);
}

TEST(CharsMap, FigureTwoLookup) {
  auto rules = ParseRulesTsv("U+41 U+302 U+300\tU+1EA6\nU+41 U+302 U+301\tU+1EA4");
  ASSERT_TRUE(rules.ok());
  auto map = CharsMap::Compile(*rules);
  ASSERT_TRUE(map.ok());
  ASSERT_NE(map->Lookup(U"Ầ"), nullptr);
  EXPECT_EQ(*map->Lookup(U"Ầ"), U"Ầ");
  EXPECT_EQ(map->Lookup(U"Â"), nullptr);
}

TEST(CharsMap, DuplicateRejected) {
  EXPECT_TRUE(
      absl::IsAlreadyExists(CharsMap::Compile({{U"x", U"y"}, {U"x", U"z"}}).status()));
  EXPECT_FALSE(CharsMap::Compile({{U"", U"y"}}).ok());
}

TEST(CharsMap, RandomRulesRoundTripAgainstLinearScan) {
  Random rng(7);
  std::vector<NormalizationRule> rules;
  std::set<std::u32string> seen;
  while (rules.size() < 1000) {
    std::u32string source, target;
    const size_t n = 1 + rng.UniformInt(4);
    for (size_t i = 0; i < n; ++i) source.push_back(U'a' + rng.UniformInt(6));
    const size_t m = rng.UniformInt(4);
    for (size_t i = 0; i < m; ++i) target.push_back(0x4E00 + rng.UniformInt(50));
    if (!seen.insert(source).second) continue;
    rules.push_back({source, target});
  }
  auto map = CharsMap::Compile(rules);
  ASSERT_TRUE(map.ok());
  for (const auto& rule : rules) {
    const std::u32string* found = map->Lookup(rule.source);
    ASSERT_NE(found, nullptr);
    EXPECT_EQ(*found, rule.target);
  }
  NormalizerSpec spec;
  spec.add_dummy_prefix = false;
  spec.remove_extra_whitespaces = false;
  spec.escape_whitespaces = false;
  for (int i = 0; i < 500; ++i) {
    std::u32string text;
    const size_t n = rng.UniformInt(30);
    for (size_t j = 0; j < n; ++j) text.push_back(U'a' + rng.UniformInt(7));
    EXPECT_EQ(Normalize(text, spec, *map), oracle::ScanRewrite(text, rules));
  }
}

TEST(Normalizer, DefaultsWithIdentityRules) {
  NormalizerSpec spec;
  spec.rule_name = "identity";
  auto normalizer = Normalizer::Create(spec);
  ASSERT_TRUE(normalizer.ok());
  EXPECT_EQ(*normalizer->Normalize("Hello world."), "▁Hello▁world.");
  EXPECT_EQ(*normalizer->Normalize(""), "");
  EXPECT_EQ(*normalizer->Normalize(" \t\r\n "), "");
  EXPECT_EQ(*normalizer->Normalize("  a \t b\n"), "▁a▁b");
}

TEST(Normalizer, FigureTwoWithoutEscapeOrPrefix) {
  NormalizerSpec spec;
  spec.rule_name = std::string(kUserRuleName);
  spec.rules = *ParseRulesTsv("U+41 U+302 U+300\tU+1EA6");
  spec.add_dummy_prefix = false;
  spec.escape_whitespaces = false;
  auto normalizer = Normalizer::Create(spec);
  ASSERT_TRUE(normalizer.ok());
  EXPECT_EQ(*normalizer->Normalize("Ầ"), "Ầ");
}

TEST(Normalizer, LongestMatchPrefersLongerSource) {
  NormalizerSpec spec;
  spec.rule_name = std::string(kUserRuleName);
  spec.rules = *ParseRulesTsv("U+61\tU+41\nU+61 U+62\tU+43");
  spec.add_dummy_prefix = false;
  auto normalizer = Normalizer::Create(spec);
  ASSERT_TRUE(normalizer.ok());
  EXPECT_EQ(*normalizer->Normalize("ab"), "C");
  EXPECT_EQ(*normalizer->Normalize("aab"), "AC");
  EXPECT_EQ(*normalizer->Normalize("ba"), "bA");
}

TEST(Normalizer, SinglePassNotFixpoint) {
  NormalizerSpec spec;
  spec.rule_name = std::string(kUserRuleName);
  spec.rules = *ParseRulesTsv("U+61\tU+62\nU+62\tU+63");
  spec.add_dummy_prefix = false;
  auto normalizer = Normalizer::Create(spec);
  ASSERT_TRUE(normalizer.ok());
  EXPECT_EQ(*normalizer->Normalize("ab"), "bc");
}

TEST(Normalizer, ConsecutiveSpacesPreserved) {
  NormalizerSpec spec;
  spec.rule_name = "identity";
  spec.remove_extra_whitespaces = false;
  spec.add_dummy_prefix = false;
  auto normalizer = Normalizer::Create(spec);
  ASSERT_TRUE(normalizer.ok());
  const std::string normalized = *normalizer->Normalize("a  b");
  EXPECT_EQ(normalized, "a▁▁b");
  EXPECT_EQ(oracle::ReplaceMeta(normalized), "a  b");
}

TEST(Normalizer, NfkcSubsetSamples) {
  auto normalizer = Normalizer::Create(NormalizerSpec{});
  ASSERT_TRUE(normalizer.ok());
  EXPECT_EQ(*normalizer->Normalize("ＡＢＣ１２３"), "▁ABC123");
  EXPECT_EQ(*normalizer->Normalize("a b　c"), "▁a▁b▁c");
  EXPECT_EQ(*normalizer->Normalize("ﬁne"), "▁fine");
}

TEST(Normalizer, RejectsInvalidUtf8) {
  auto normalizer = Normalizer::Create(NormalizerSpec{});
  ASSERT_TRUE(normalizer.ok());
  EXPECT_TRUE(absl::IsInvalidArgument(normalizer->Normalize("a\xC3").status()));
  EXPECT_FALSE(normalizer->Normalize("\xED\xA0\x80").ok());
}

TEST(Normalizer, UnknownRuleName) {
  NormalizerSpec spec;
  spec.rule_name = "nope";
  EXPECT_TRUE(absl::IsNotFound(Normalizer::Create(spec).status()));
}

// Properties over random text mixing whitespace, CJK, rule sources and the
// meta symbol itself.
class NormalizerProperty : public ::testing::TestWithParam<int> {};

TEST_P(NormalizerProperty, MatchesReferenceAndInvariants) {
  const int flags = GetParam();
  NormalizerSpec spec;
  spec.add_dummy_prefix = flags & 1;
  spec.remove_extra_whitespaces = flags & 2;
  spec.escape_whitespaces = flags & 4;
  auto normalizer = Normalizer::Create(spec);
  ASSERT_TRUE(normalizer.ok());
  const auto& rules = normalizer->spec().rules;
  const std::vector<std::string> alphabet = {
      " ", " ", "\t", "\n", "\r", "a", "b", "Z", "日", "本", "Ａ", " ",
      "　", "ﬁ", "Â", "̀", "▁", "é", "😀"};
  Random rng(100 + flags);
  for (int i = 0; i < 2000; ++i) {
    const std::string text = oracle::RandomString(rng, alphabet, 20);
    auto decoded = unicode::DecodeUtf8(text);
    ASSERT_TRUE(decoded.ok());
    const std::string got = *normalizer->Normalize(text);
    const std::string want = Utf8(oracle::ReferenceNormalize(
        *decoded, rules, spec.add_dummy_prefix, spec.remove_extra_whitespaces,
        spec.escape_whitespaces));
    ASSERT_EQ(got, want) << text;
    EXPECT_EQ(*normalizer->Normalize(text), got);  // determinism
    if (spec.escape_whitespaces) {
      EXPECT_EQ(got.find(' '), std::string::npos);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllFlagCombinations, NormalizerProperty,
                         ::testing::Range(0, 8));

TEST(Normalizer, EscapeIsBijectionWithoutMeta) {
  NormalizerSpec spec;
  spec.rule_name = "identity";
  spec.add_dummy_prefix = false;
  spec.remove_extra_whitespaces = false;
  auto normalizer = Normalizer::Create(spec);
  ASSERT_TRUE(normalizer.ok());
  Random rng(3);
  const std::vector<std::string> alphabet = {" ", "a", "b", "日", "\t", "é"};
  for (int i = 0; i < 1000; ++i) {
    const std::string text = oracle::RandomString(rng, alphabet, 16);
    const std::string escaped = *normalizer->Normalize(text);
    EXPECT_EQ(oracle::ReplaceMeta(escaped), text);
  }
}

}  // namespace
}  // namespace subpiece
