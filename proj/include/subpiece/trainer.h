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

#ifndef SUBPIECE_TRAINER_H_
#define SUBPIECE_TRAINER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "subpiece/model_store.h"
#include "subpiece/vocab.h"

namespace subpiece {

struct TrainerSpec {
  std::vector<std::string> input;
  std::string model_prefix;
  int vocab_size = 8000;
  ModelType model_type = ModelType::kUnigram;

  // At most one of these may be set explicitly; an empty rule TSV path means
  // the named bundle is used.
  std::string normalization_rule_name = "nfkc_subset";
  std::string normalization_rule_tsv;
  bool add_dummy_prefix = true;
  bool remove_extra_whitespaces = true;

  double character_coverage = 1.0;
  // Recorded in the model. Training itself is deterministic.
  uint64_t seed = 0;

  SpecialSymbols specials;
  std::vector<std::string> user_defined_symbols;

  // Unigram schedule.
  double shrink_factor = 0.75;
  int em_iterations = 2;
  int seed_size_factor = 4;
  int max_piece_length = 16;
};

inline constexpr int kMinVocabSize = 16;

// Normalizes `raw_sentences` and trains a model in memory.
absl::StatusOr<ModelBundle> TrainBundle(
    const TrainerSpec& spec, const std::vector<std::string>& raw_sentences);

// Reads spec.input (one sentence per line), trains, and writes
// <model_prefix>.model and <model_prefix>.vocab.
absl::Status Train(const TrainerSpec& spec);

// Parses the command line flag syntax ("--input=a.txt --vocab_size=1000"),
// shared by spm_train and the scripting bindings. Unknown or malformed
// flags are InvalidArgument.
absl::StatusOr<TrainerSpec> ParseTrainerFlags(std::string_view flags);
absl::StatusOr<TrainerSpec> ParseTrainerFlags(int argc, const char* const* argv);
std::string TrainerFlagsHelp();

// ParseTrainerFlags followed by Train.
absl::Status Train(std::string_view flags);

}  // namespace subpiece

#endif  // SUBPIECE_TRAINER_H_
