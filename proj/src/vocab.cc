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

#include "subpiece/vocab.h"

#include "absl/status/status.h"
#include "fmt/format.h"

namespace subpiece {

int SpecialSymbols::count() const {
  return (unk_id >= 0) + (bos_id >= 0) + (eos_id >= 0) + (pad_id >= 0);
}

absl::StatusOr<Vocabulary> Vocabulary::Build(
    const std::vector<ScoredPiece>& pieces, const SpecialSymbols& specials,
    const std::vector<std::string>& user_defined) {
  if (specials.unk_id < 0) {
    return absl::InvalidArgumentError("unk_id must be defined");
  }
  const int size = specials.count() + static_cast<int>(user_defined.size()) +
                   static_cast<int>(pieces.size());

  Vocabulary vocab;
  vocab.specials_ = specials;
  vocab.id_to_piece_.resize(size);
  vocab.scores_.assign(size, 0.0);
  vocab.types_.assign(size, PieceType::kNormal);
  std::vector<bool> taken(size, false);

  const struct {
    const char* flag;
    int id;
    const std::string& piece;
    PieceType type;
  } metas[] = {
      {"unk_id", specials.unk_id, specials.unk_piece, PieceType::kUnknown},
      {"bos_id", specials.bos_id, specials.bos_piece, PieceType::kControl},
      {"eos_id", specials.eos_id, specials.eos_piece, PieceType::kControl},
      {"pad_id", specials.pad_id, specials.pad_piece, PieceType::kControl},
  };
  for (const auto& meta : metas) {
    if (meta.id < 0) continue;
    if (meta.id >= size) {
      return absl::InvalidArgumentError(fmt::format(
          "{}={} is out of range for a vocabulary of size {}", meta.flag,
          meta.id, size));
    }
    if (taken[meta.id]) {
      return absl::InvalidArgumentError(
          fmt::format("{}={} is already assigned", meta.flag, meta.id));
    }
    taken[meta.id] = true;
    vocab.id_to_piece_[meta.id] = meta.piece;
    vocab.types_[meta.id] = meta.type;
  }

  int next = 0;
  auto place = [&](const std::string& piece, double score, PieceType type) {
    while (taken[next]) ++next;
    taken[next] = true;
    vocab.id_to_piece_[next] = piece;
    vocab.scores_[next] = score;
    vocab.types_[next] = type;
  };
  for (const auto& symbol : user_defined) {
    place(symbol, 0.0, PieceType::kUserDefined);
  }
  for (const auto& piece : pieces) {
    place(piece.piece, piece.score, PieceType::kNormal);
  }

  for (int id = 0; id < size; ++id) {
    const std::string& piece = vocab.id_to_piece_[id];
    if (piece.empty()) {
      return absl::InvalidArgumentError(
          fmt::format("empty piece at id {}", id));
    }
    if (!vocab.piece_to_id_.emplace(piece, id).second) {
      return absl::AlreadyExistsError(
          fmt::format("symbol \"{}\" is defined more than once", piece));
    }
  }
  return vocab;
}

int Vocabulary::PieceToId(std::string_view piece) const {
  const auto it = piece_to_id_.find(piece);
  return it == piece_to_id_.end() ? specials_.unk_id : it->second;
}

absl::StatusOr<std::string_view> Vocabulary::IdToPiece(int id) const {
  if (id < 0 || id >= size()) {
    return absl::OutOfRangeError(fmt::format(
        "id {} is out of range [0, {})", id, size()));
  }
  return std::string_view(id_to_piece_[id]);
}

std::string Vocabulary::ExportVocab() const {
  std::string out;
  for (int id = 0; id < size(); ++id) {
    fmt::format_to(std::back_inserter(out), "{}\t{:g}\n", id_to_piece_[id], scores_[id]);
  }
  return out;
}

}  // namespace subpiece
