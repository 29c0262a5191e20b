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

#ifndef SUBPIECE_VOCAB_H_
#define SUBPIECE_VOCAB_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subpiece/string_util.h"
#include "absl/status/statusor.h"

namespace subpiece {

enum class PieceType : uint8_t {
  kNormal = 1,
  kUnknown = 2,
  kControl = 3,
  kUserDefined = 4,
};

// Reserved meta symbols. An id of -1 disables the symbol (not allowed for
// unk).
struct SpecialSymbols {
  int unk_id = 0;
  int bos_id = 1;
  int eos_id = 2;
  int pad_id = -1;
  std::string unk_piece = "<unk>";
  std::string bos_piece = "<s>";
  std::string eos_piece = "</s>";
  std::string pad_piece = "<pad>";
  // What DecodeIds emits for unk_id.
  std::string unk_surface = "<unk>";

  // Number of enabled symbols.
  int count() const;

  friend bool operator==(const SpecialSymbols&,
                         const SpecialSymbols&) = default;
};

struct ScoredPiece {
  std::string piece;
  double score = 0.0;

  friend bool operator==(const ScoredPiece&, const ScoredPiece&) = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  // Meta symbols take their configured ids; the remaining ids are filled in
  // ascending order by user-defined symbols and then trained pieces.
  static absl::StatusOr<Vocabulary> Build(
      const std::vector<ScoredPiece>& pieces, const SpecialSymbols& specials,
      const std::vector<std::string>& user_defined);

  int size() const { return static_cast<int>(id_to_piece_.size()); }

  // Total: unknown pieces map to unk_id().
  int PieceToId(std::string_view piece) const;

  // OutOfRange for ids outside [0, size()).
  absl::StatusOr<std::string_view> IdToPiece(int id) const;

  double Score(int id) const { return scores_[id]; }
  PieceType Type(int id) const { return types_[id]; }
  bool IsControl(int id) const { return types_[id] == PieceType::kControl; }
  bool IsUnknown(int id) const { return types_[id] == PieceType::kUnknown; }

  int unk_id() const { return specials_.unk_id; }
  int bos_id() const { return specials_.bos_id; }
  int eos_id() const { return specials_.eos_id; }
  int pad_id() const { return specials_.pad_id; }
  const SpecialSymbols& specials() const { return specials_; }

  // One "piece<TAB>score" line per id, in id order.
  std::string ExportVocab() const;

 private:
  SpecialSymbols specials_;
  std::vector<std::string> id_to_piece_;
  std::vector<double> scores_;
  std::vector<PieceType> types_;
  StringMap<int> piece_to_id_;
};

}  // namespace subpiece

#endif  // SUBPIECE_VOCAB_H_
