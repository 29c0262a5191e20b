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

#include "subpiece/bpe_model.h"

#include <limits>
#include <queue>

#include "absl/status/status.h"
#include "fmt/format.h"
#include "subpiece/unicode.h"

namespace subpiece {
namespace bpe {

absl::StatusOr<Model> Model::Create(std::vector<std::string> pieces,
                                    std::vector<Merge> merges) {
  Model model;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].empty()) {
      return absl::InvalidArgumentError("empty BPE piece");
    }
    if (!model.piece_index_.emplace(pieces[i], static_cast<int>(i)).second) {
      return absl::AlreadyExistsError(
          fmt::format("duplicate BPE piece \"{}\"", pieces[i]));
    }
  }
  for (size_t i = 0; i < merges.size(); ++i) {
    const Merge& merge = merges[i];
    if (merge.rank != static_cast<int>(i)) {
      return absl::InvalidArgumentError(fmt::format(
          "merge {} has rank {}; ranks must be contiguous from 0", i,
          merge.rank));
    }
    const int left = model.PieceIndex(merge.left);
    const int right = model.PieceIndex(merge.right);
    const int result = model.PieceIndex(merge.left + merge.right);
    if (left < 0 || right < 0 || result < 0) {
      return absl::InvalidArgumentError(fmt::format(
          "merge (\"{}\", \"{}\") refers to a missing piece", merge.left,
          merge.right));
    }
    // Only the first (lowest-rank) occurrence of a pair is reachable.
    model.merge_table_.try_emplace(PairKey(left, right),
                                   MergeTarget{merge.rank, result});
    model.naive_ranks_.try_emplace({merge.left, merge.right}, merge.rank);
  }
  model.pieces_ = std::move(pieces);
  model.merges_ = std::move(merges);
  return model;
}

int Model::PieceIndex(std::string_view piece) const {
  const auto it = piece_index_.find(piece);
  return it == piece_index_.end() ? -1 : it->second;
}

std::vector<std::string_view> Model::SegmentNaive(std::string_view text) const {
  std::vector<std::string_view> symbols = unicode::SplitChars(text);
  while (symbols.size() >= 2) {
    int best_rank = std::numeric_limits<int>::max();
    size_t best_pos = 0;
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto it = naive_ranks_.find(std::make_pair(symbols[i], symbols[i + 1]));
      if (it != naive_ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best_pos = i;
      }
    }
    if (best_rank == std::numeric_limits<int>::max()) break;
    const std::string_view left = symbols[best_pos];
    symbols[best_pos] =
        std::string_view(left.data(), left.size() + symbols[best_pos + 1].size());
    symbols.erase(symbols.begin() + best_pos + 1);
  }
  return symbols;
}

std::vector<std::string_view> Model::SegmentHeap(std::string_view text) const {
  struct Symbol {
    int prev;
    int next;
    size_t begin;
    size_t size;  // in bytes; 0 once absorbed into the left neighbour
    int piece;    // -1 for characters outside the model
  };
  struct Candidate {
    int rank;
    int left;
    int right;
    size_t size;  // combined byte size when queued, to detect stale entries
  };
  // std::priority_queue is a max-heap; the smallest (rank, left) is on top.
  auto worse = [](const Candidate& a, const Candidate& b) {
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.left > b.left;
  };

  std::vector<Symbol> symbols;
  symbols.reserve(text.size());
  for (size_t pos = 0; pos < text.size();) {
    const size_t len = std::min(
        unicode::OneCharLen(static_cast<unsigned char>(text[pos])),
        text.size() - pos);
    const int index = static_cast<int>(symbols.size());
    symbols.push_back(Symbol{index - 1, index + 1, pos, len,
                             PieceIndex(text.substr(pos, len))});
    pos += len;
  }
  if (symbols.empty()) return {};
  symbols.back().next = -1;

  std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)>
      agenda(worse);
  auto maybe_push = [&](int left, int right) {
    if (left < 0 || right < 0) return;
    const Symbol& l = symbols[left];
    const Symbol& r = symbols[right];
    if (l.piece < 0 || r.piece < 0) return;
    const auto it = merge_table_.find(PairKey(l.piece, r.piece));
    if (it == merge_table_.end()) return;
    agenda.push(Candidate{it->second.rank, left, right, l.size + r.size});
  };

  for (size_t i = 0; i + 1 < symbols.size(); ++i) {
    maybe_push(static_cast<int>(i), static_cast<int>(i + 1));
  }

  while (!agenda.empty()) {
    const Candidate top = agenda.top();
    agenda.pop();
    Symbol& left = symbols[top.left];
    Symbol& right = symbols[top.right];
    if (left.size == 0 || right.size == 0 || left.next != top.right ||
        left.size + right.size != top.size) {
      continue;
    }
    const auto it = merge_table_.find(PairKey(left.piece, right.piece));
    left.piece = it->second.result;
    left.size += right.size;
    left.next = right.next;
    if (right.next >= 0) symbols[right.next].prev = top.left;
    right.size = 0;
    maybe_push(left.prev, top.left);
    maybe_push(top.left, left.next);
  }

  std::vector<std::string_view> out;
  for (int i = 0; i >= 0; i = symbols[i].next) {
    out.push_back(text.substr(symbols[i].begin, symbols[i].size));
  }
  return out;
}

}  // namespace bpe
}  // namespace subpiece
