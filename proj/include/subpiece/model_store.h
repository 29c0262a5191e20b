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

#ifndef SUBPIECE_MODEL_STORE_H_
#define SUBPIECE_MODEL_STORE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "subpiece/bpe_model.h"
#include "subpiece/normalizer.h"
#include "subpiece/vocab.h"

namespace subpiece {

enum class ModelType : uint8_t {
  kUnigram = 1,
  kBpe = 2,
};

// Everything needed to reproduce normalization, segmentation and id mapping.
struct ModelBundle {
  // Rules are always materialized.
  NormalizerSpec normalizer;
  ModelType type = ModelType::kUnigram;
  // Trained pieces in score order. Unigram scores are log probabilities;
  // BPE scores are -index.
  std::vector<ScoredPiece> pieces;
  // BPE only, in rank order.
  std::vector<bpe::Merge> merges;
  SpecialSymbols specials;
  std::vector<std::string> user_defined_symbols;
  // Training configuration, sorted by key. Informational only.
  std::vector<std::pair<std::string, std::string>> trainer_params;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

// File layout (all integers little-endian):
//
//   magic            8 bytes  "SUBPIECE"
//   format_version   u32
//   record*          u16 tag, u64 length, `length` payload bytes
//
// Strings are a u32 byte length followed by UTF-8 bytes; scores are
// IEEE-754 binary64. Records are written in ascending tag order. Readers
// skip unknown tags and reject repeated known tags.
namespace model_file {

inline constexpr std::string_view kMagic = "SUBPIECE";
inline constexpr uint32_t kFormatVersion = 1;

enum Tag : uint16_t {
  kNormalizerSpec = 1,
  kCharsMap = 2,
  kModelType = 3,
  kPieces = 4,
  kMerges = 5,
  kSpecials = 6,
  kTrainerParams = 7,
};

}  // namespace model_file

std::string Serialize(const ModelBundle& bundle);

// Errors: InvalidArgument for data that is not a model file, DataLoss for
// truncated or malformed records (with the byte offset), Unimplemented for
// newer format versions.
absl::StatusOr<ModelBundle> Deserialize(std::string_view bytes);

absl::Status WriteFile(const std::string& path, std::string_view contents);
absl::StatusOr<std::string> ReadFile(const std::string& path);

}  // namespace subpiece

#endif  // SUBPIECE_MODEL_STORE_H_
