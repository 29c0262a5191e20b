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

#include <limits>
#include <memory>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "fmt/format.h"
#include "subpiece/trainer.h"

namespace subpiece {
namespace {

// Binds every training flag to `spec`.
std::unique_ptr<CLI::App> MakeTrainerApp(TrainerSpec* spec) {
  auto app = std::make_unique<CLI::App>(
      "Trains a subword model from raw sentences.", "spm_train");
  app->set_help_flag();
  app->allow_extras(false);

  app->add_option("--input", spec->input,
                  "Comma separated training files, one sentence per line")
      ->required()
      ->delimiter(',');
  app->add_option("--model_prefix", spec->model_prefix,
                  "Writes <prefix>.model and <prefix>.vocab")
      ->required();
  app->add_option("--vocab_size", spec->vocab_size,
                  "Final vocabulary size including meta symbols")
      ->required()
      ->check(CLI::Range(kMinVocabSize, std::numeric_limits<int>::max()));
  app->add_option("--model_type", spec->model_type, "unigram or bpe")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ModelType>{{"unigram", ModelType::kUnigram},
                                           {"bpe", ModelType::kBpe}}));
  auto* rule_name = app->add_option("--normalization_rule_name",
                                    spec->normalization_rule_name,
                                    "Bundled rules: nfkc_subset or identity");
  auto* rule_tsv = app->add_option("--normalization_rule_tsv",
                                   spec->normalization_rule_tsv,
                                   "Custom normalization rules in TSV");
  rule_name->excludes(rule_tsv);
  rule_tsv->excludes(rule_name);
  app->add_option("--add_dummy_prefix", spec->add_dummy_prefix);
  app->add_option("--remove_extra_whitespaces", spec->remove_extra_whitespaces);
  app->add_option("--character_coverage", spec->character_coverage)
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", spec->seed);

  app->add_option("--unk_id", spec->specials.unk_id);
  app->add_option("--bos_id", spec->specials.bos_id, "-1 disables <s>");
  app->add_option("--eos_id", spec->specials.eos_id, "-1 disables </s>");
  app->add_option("--pad_id", spec->specials.pad_id, "-1 disables <pad>");
  app->add_option("--unk_piece", spec->specials.unk_piece);
  app->add_option("--bos_piece", spec->specials.bos_piece);
  app->add_option("--eos_piece", spec->specials.eos_piece);
  app->add_option("--pad_piece", spec->specials.pad_piece);
  app->add_option("--unk_surface", spec->specials.unk_surface,
                  "Decoder output for <unk>");
  app->add_option("--user_defined_symbols", spec->user_defined_symbols,
                  "Comma separated control symbols, e.g. <2ja>,<2de>")
      ->delimiter(',');

  app->add_option("--shrinking_factor", spec->shrink_factor)
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--num_sub_iterations", spec->em_iterations)
      ->check(CLI::PositiveNumber);
  app->add_option("--seed_size_factor", spec->seed_size_factor)
      ->check(CLI::PositiveNumber);
  app->add_option("--max_sentencepiece_length", spec->max_piece_length)
      ->check(CLI::Range(1, 16));
  return app;
}

template <typename ParseFn>
absl::StatusOr<TrainerSpec> ParseWith(ParseFn&& parse) {
  TrainerSpec spec;
  auto app = MakeTrainerApp(&spec);
  try {
    parse(*app);
  } catch (const CLI::ParseError& e) {
    return absl::InvalidArgumentError(e.what());
  }
  return spec;
}

}  // namespace

absl::StatusOr<TrainerSpec> ParseTrainerFlags(std::string_view flags) {
  return ParseWith([&](CLI::App& app) { app.parse(std::string(flags), false); });
}

absl::StatusOr<TrainerSpec> ParseTrainerFlags(int argc,
                                              const char* const* argv) {
  return ParseWith([&](CLI::App& app) { app.parse(argc, argv); });
}

std::string TrainerFlagsHelp() {
  TrainerSpec spec;
  return MakeTrainerApp(&spec)->help();
}

}  // namespace subpiece
