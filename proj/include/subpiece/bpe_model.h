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

#ifndef SUBPIECE_BPE_MODEL_H_
#define SUBPIECE_BPE_MODEL_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "subpiece/string_util.h"

namespace subpiece {
namespace bpe {

struct Merge {
  std::string left;
  std::string right;
  int rank = 0;  // 0 is the merge learned first.

  friend bool operator==(const Merge&, const Merge&) = default;
};

// An ordered merge list plus the resulting piece inventory. Pieces are the
// retained single characters followed by merge products in learned order.
class Model {
 public:
  Model() = default;

  // Validates that merge ranks are 0..n-1 in order, that every operand and
  // product is a piece, and that pieces are unique.
  static absl::StatusOr<Model> Create(std::vector<std::string> pieces,
                                      std::vector<Merge> merges);

  const std::vector<std::string>& pieces() const { return pieces_; }
  const std::vector<Merge>& merges() const { return merges_; }

  // Returns the index of `piece` in pieces(), or -1.
  int PieceIndex(std::string_view piece) const;

  // Reference O(N^2) segmenter: repeatedly applies the lowest-rank merge at
  // its leftmost occurrence. Returned views point into `text`.
  std::vector<std::string_view> SegmentNaive(std::string_view text) const;

  // O(N log N) segmenter over a linked symbol list and a priority queue of
  // (rank, position) candidates. Always agrees with SegmentNaive.
  std::vector<std::string_view> SegmentHeap(std::string_view text) const;

  friend bool operator==(const Model& a, const Model& b) {
    return a.pieces_ == b.pieces_ && a.merges_ == b.merges_;
  }

 private:
  struct MergeTarget {
    int rank;
    int result;
  };

  struct PairLess {
    using is_transparent = void;
    template <typename A, typename B>
    bool operator()(const A& a, const B& b) const {
      const std::string_view al = a.first, ar = a.second;
      const std::string_view bl = b.first, br = b.second;
      if (al != bl) return al < bl;
      return ar < br;
    }
  };

  static uint64_t PairKey(int left, int right) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(left)) << 32) |
           static_cast<uint32_t>(right);
  }

  std::vector<std::string> pieces_;
  std::vector<Merge> merges_;
  StringMap<int> piece_index_;
  absl::flat_hash_map<uint64_t, MergeTarget> merge_table_;
  // Used only by SegmentNaive.
  std::map<std::pair<std::string, std::string>, int, PairLess> naive_ranks_;
};

struct TrainOptions {
  // Final vocabulary size including meta symbols.
  int vocab_size = 0;
  int meta_symbol_count = 0;
  // Fraction of character mass that must be covered by base pieces.
  double character_coverage = 1.0;
  // Merge products that must never become pieces (meta symbol strings).
  std::vector<std::string> reserved_pieces;
};

// Learns merges on whitespace-escaped sentences until
// pieces + meta_symbol_count == vocab_size. Pair-frequency ties are broken
// by the lexicographic order of (left, right); pairs seen fewer than twice
// are never merged.
absl::StatusOr<Model> Train(const std::vector<std::string>& sentences,
                            const TrainOptions& options);

}  // namespace bpe
}  // namespace subpiece

#endif  // SUBPIECE_BPE_MODEL_H_
