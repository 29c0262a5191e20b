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

#include "subpiece/trainer.h"

#include <algorithm>

#include "absl/status/status.h"
#include "fmt/format.h"
#include "fmt/ranges.h"
#include "subpiece/bpe_model.h"
#include "subpiece/normalizer.h"
#include "subpiece/unigram_model.h"

namespace subpiece {
namespace {

std::vector<std::pair<std::string, std::string>> DescribeSpec(
    const TrainerSpec& spec) {
  std::vector<std::pair<std::string, std::string>> params = {
      {"character_coverage", fmt::format("{:.17g}", spec.character_coverage)},
      {"input", fmt::format("{}", fmt::join(spec.input, ","))},
      {"model_type", spec.model_type == ModelType::kBpe ? "bpe" : "unigram"},
      {"normalization_rule_name", spec.normalization_rule_name},
      {"normalization_rule_tsv", spec.normalization_rule_tsv},
      {"seed", fmt::format("{}", spec.seed)},
      {"vocab_size", fmt::format("{}", spec.vocab_size)},
  };
  if (spec.model_type == ModelType::kUnigram) {
    params.push_back({"em_iterations", fmt::format("{}", spec.em_iterations)});
    params.push_back(
        {"max_piece_length", fmt::format("{}", spec.max_piece_length)});
    params.push_back(
        {"seed_size_factor", fmt::format("{}", spec.seed_size_factor)});
    params.push_back(
        {"shrink_factor", fmt::format("{:.17g}", spec.shrink_factor)});
  }
  std::sort(params.begin(), params.end());
  return params;
}

absl::StatusOr<NormalizerSpec> MakeNormalizerSpec(const TrainerSpec& spec) {
  NormalizerSpec ns;
  ns.add_dummy_prefix = spec.add_dummy_prefix;
  ns.remove_extra_whitespaces = spec.remove_extra_whitespaces;
  ns.escape_whitespaces = true;
  if (!spec.normalization_rule_tsv.empty()) {
    auto tsv = ReadFile(spec.normalization_rule_tsv);
    if (!tsv.ok()) return tsv.status();
    auto rules = ParseRulesTsv(*tsv);
    if (!rules.ok()) {
      return absl::Status(rules.status().code(),
                          fmt::format("{}: {}", spec.normalization_rule_tsv,
                                          std::string(rules.status().message())));
    }
    ns.rule_name = std::string(kUserRuleName);
    ns.rules = *std::move(rules);
  } else {
    ns.rule_name = spec.normalization_rule_name;
    auto rules = BuiltinRules(ns.rule_name);
    if (!rules.ok()) return rules.status();
    ns.rules = *std::move(rules);
  }
  return ns;
}

}  // namespace

absl::StatusOr<ModelBundle> TrainBundle(
    const TrainerSpec& spec, const std::vector<std::string>& raw_sentences) {
  if (spec.vocab_size < kMinVocabSize) {
    return absl::InvalidArgumentError(fmt::format(
        "vocab_size must be at least {}, got {}", kMinVocabSize,
        spec.vocab_size));
  }
  auto normalizer_spec = MakeNormalizerSpec(spec);
  if (!normalizer_spec.ok()) return normalizer_spec.status();
  auto normalizer = Normalizer::CreateMaterialized(*normalizer_spec);
  if (!normalizer.ok()) return normalizer.status();

  std::vector<std::string> sentences;
  sentences.reserve(raw_sentences.size());
  for (size_t i = 0; i < raw_sentences.size(); ++i) {
    auto normalized = normalizer->Normalize(raw_sentences[i]);
    if (!normalized.ok()) {
      return absl::InvalidArgumentError(fmt::format(
          "sentence {}: {}", i + 1, std::string(normalized.status().message())));
    }
    if (!normalized->empty()) sentences.push_back(*std::move(normalized));
  }

  std::vector<std::string> reserved = spec.user_defined_symbols;
  for (const auto& [id, piece] :
       {std::pair{spec.specials.unk_id, spec.specials.unk_piece},
        std::pair{spec.specials.bos_id, spec.specials.bos_piece},
        std::pair{spec.specials.eos_id, spec.specials.eos_piece},
        std::pair{spec.specials.pad_id, spec.specials.pad_piece}}) {
    if (id >= 0) reserved.push_back(piece);
  }
  const int meta_count = spec.specials.count() +
                         static_cast<int>(spec.user_defined_symbols.size());

  ModelBundle bundle;
  bundle.normalizer = *std::move(normalizer_spec);
  bundle.type = spec.model_type;
  bundle.specials = spec.specials;
  bundle.user_defined_symbols = spec.user_defined_symbols;
  bundle.trainer_params = DescribeSpec(spec);

  if (spec.model_type == ModelType::kBpe) {
    bpe::TrainOptions options;
    options.vocab_size = spec.vocab_size;
    options.meta_symbol_count = meta_count;
    options.character_coverage = spec.character_coverage;
    options.reserved_pieces = reserved;
    auto model = bpe::Train(sentences, options);
    if (!model.ok()) return model.status();
    for (size_t i = 0; i < model->pieces().size(); ++i) {
      bundle.pieces.push_back({model->pieces()[i], -static_cast<double>(i)});
    }
    bundle.merges = model->merges();
  } else {
    unigram::TrainOptions options;
    options.vocab_size = spec.vocab_size;
    options.meta_symbol_count = meta_count;
    options.character_coverage = spec.character_coverage;
    options.seed_size_factor = spec.seed_size_factor;
    options.max_piece_length = spec.max_piece_length;
    options.shrink_factor = spec.shrink_factor;
    options.em_iterations = spec.em_iterations;
    options.reserved_pieces = reserved;
    auto model = unigram::Train(sentences, options);
    if (!model.ok()) return model.status();
    for (const auto& piece : model->pieces()) {
      bundle.pieces.push_back({piece.text, piece.log_prob});
    }
  }

  // Validates the id layout.
  auto vocab = Vocabulary::Build(bundle.pieces, bundle.specials,
                                 bundle.user_defined_symbols);
  if (!vocab.ok()) return vocab.status();
  return bundle;
}

absl::Status Train(const TrainerSpec& spec) {
  if (spec.input.empty()) {
    return absl::InvalidArgumentError("no input files given");
  }
  if (spec.model_prefix.empty()) {
    return absl::InvalidArgumentError("model_prefix is empty");
  }
  std::vector<std::string> sentences;
  for (const auto& path : spec.input) {
    auto contents = ReadFile(path);
    if (!contents.ok()) return contents.status();
    for (std::string_view line : SplitString(*contents, '\n')) {
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      sentences.emplace_back(line);
    }
  }
  auto bundle = TrainBundle(spec, sentences);
  if (!bundle.ok()) return bundle.status();
  auto vocab = Vocabulary::Build(bundle->pieces, bundle->specials,
                                 bundle->user_defined_symbols);
  if (!vocab.ok()) return vocab.status();
  if (auto s = WriteFile(spec.model_prefix + ".model", Serialize(*bundle));
      !s.ok()) {
    return s;
  }
  return WriteFile(spec.model_prefix + ".vocab", vocab->ExportVocab());
}

absl::Status Train(std::string_view flags) {
  auto spec = ParseTrainerFlags(flags);
  if (!spec.ok()) return spec.status();
  return Train(*spec);
}

}  // namespace subpiece
