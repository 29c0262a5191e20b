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

#ifndef SUBPIECE_UNIGRAM_MODEL_H_
#define SUBPIECE_UNIGRAM_MODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "subpiece/random.h"
#include "subpiece/string_util.h"

namespace subpiece {
namespace unigram {

// Penalty subtracted from the lowest piece log probability to score
// characters the model does not know.
inline constexpr double kUnknownPenalty = 10.0;

// Two path scores closer than this are treated as tied in Viterbi.
inline constexpr double kScoreTieEpsilon = 1e-9;

struct Piece {
  std::string text;
  double log_prob = 0.0;  // natural log

  friend bool operator==(const Piece&, const Piece&) = default;
};

class Model {
 public:
  Model() = default;

  // Pieces must be non-empty, valid UTF-8 and unique.
  static absl::StatusOr<Model> Create(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  size_t size() const { return pieces_.size(); }
  int PieceIndex(std::string_view piece) const;

  // Lowest finite log probability among the pieces.
  double min_log_prob() const { return min_log_prob_; }
  double unknown_log_prob() const { return min_log_prob_ - kUnknownPenalty; }

  // Calls `fn(piece_index, byte_length)` for every piece that is a prefix of
  // `text`, shortest first. Pieces with -inf log probability are skipped.
  template <typename Fn>
  void ForEachPrefix(std::string_view text, Fn&& fn) const;

  // Highest scoring segmentation. Ties: fewer pieces, then the longest first
  // piece, recursively. Returned views point into `text`.
  std::vector<std::string_view> Viterbi(std::string_view text) const;

  // Viterbi that treats piece `excluded` as absent. Returns piece indices
  // (-1 for unknown characters) and stores the path score.
  std::vector<int> ViterbiIds(std::string_view text, int excluded,
                              double* score) const;

  // The `n` best segmentations with their scores, best first.
  std::vector<std::pair<std::vector<std::string_view>, double>> NBest(
      std::string_view text, int n) const;

  // Draws a segmentation. nbest == -1 samples from the whole lattice with
  // probability proportional to (prod p_i)^alpha; nbest >= 1 samples among
  // the nbest best paths with the same weighting.
  absl::StatusOr<std::vector<std::string_view>> Sample(std::string_view text,
                                                       int nbest, double alpha,
                                                       Random* rng) const;

  friend bool operator==(const Model& a, const Model& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  static uint64_t EdgeKey(int32_t node, unsigned char byte) {
    return (static_cast<uint64_t>(node) << 8) | byte;
  }

  std::vector<Piece> pieces_;
  double min_log_prob_ = 0.0;
  // Byte trie over pieces. accept_[node] is a piece index or -1.
  std::vector<int32_t> accept_{-1};
  absl::flat_hash_map<uint64_t, int32_t> edges_;
  StringMap<int> index_;
};

// Segmentation lattice over the code points of a sentence. Every span that
// matches a piece becomes a node; characters without a single-character
// piece get an unknown node so every position has an outgoing edge.
class Lattice {
 public:
  struct Node {
    int begin;  // code point positions
    int end;
    int piece;  // -1 for an unknown character
    double score;
  };

  Lattice(std::string_view text, const Model& model, int excluded = -1);

  int size() const { return static_cast<int>(offsets_.size()) - 1; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& begin_nodes(int pos) const { return begin_[pos]; }
  const std::vector<int>& end_nodes(int pos) const { return end_[pos]; }
  std::string_view surface(const Node& node) const;

  // Log of the summed weight of all paths from 0 to each position, with
  // node scores multiplied by `theta`.
  std::vector<double> Forward(double theta = 1.0) const;
  // Same from each position to the end.
  std::vector<double> Backward(double theta = 1.0) const;

  // Posterior probability of each node; stores the log partition function.
  std::vector<double> Marginals(double* log_z) const;

 private:
  std::string_view text_;
  std::vector<size_t> offsets_;  // byte offset of each code point, plus end
  std::vector<Node> nodes_;
  std::vector<std::vector<int>> begin_;
  std::vector<std::vector<int>> end_;
};

// log(exp(a) + exp(b)) that tolerates -inf operands.
double LogSumExp(double a, double b);

template <typename Fn>
void Model::ForEachPrefix(std::string_view text, Fn&& fn) const {
  int32_t node = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    const auto it =
        edges_.find(EdgeKey(node, static_cast<unsigned char>(text[i])));
    if (it == edges_.end()) return;
    node = it->second;
    const int piece = accept_[node];
    if (piece >= 0 && pieces_[piece].log_prob > -1e300) fn(piece, i + 1);
  }
}

// ---- Training -----------------------------------------------------------

// A deduplicated corpus: each distinct sentence with its multiplicity.
using WeightedCorpus = std::vector<std::pair<std::string, int64_t>>;

WeightedCorpus MakeWeightedCorpus(const std::vector<std::string>& sentences);

struct SeedOptions {
  int max_piece_length = 16;
  // Disallow U+2581 anywhere but the first position of a multi-char piece.
  bool split_by_whitespace = true;
  std::vector<std::string> reserved_pieces;
};

// All characters plus the highest scoring substrings (frequency x length,
// ties by byte order), found with a suffix array. Substrings never span
// sentence boundaries. Characters come first, most frequent first.
absl::StatusOr<std::vector<std::pair<std::string, int64_t>>> MakeSeedVocab(
    const std::vector<std::string>& sentences, int seed_size,
    const SeedOptions& options = {});

struct EmResult {
  Model model;
  // Corpus log likelihood under the input model.
  double log_likelihood = 0.0;
};

// One EM iteration: expected piece counts by forward-backward, then
// log_prob_i = log(count_i / sum(counts)).
absl::StatusOr<EmResult> EmStep(const Model& model, const WeightedCorpus& corpus);
absl::StatusOr<EmResult> EmStep(const Model& model,
                                const std::vector<std::string>& sentences);

struct PruneOptions {
  double shrink_factor = 0.75;
  int em_iterations = 2;
};

// Alternates EM with removal of the multi-character pieces whose removal
// costs the least corpus likelihood until at most `target_size` pieces
// remain. Single-character pieces are never removed.
absl::StatusOr<Model> PruneVocab(const Model& model, const WeightedCorpus& corpus,
                                 int target_size,
                                 const PruneOptions& options = {});

struct TrainOptions {
  int vocab_size = 0;
  int meta_symbol_count = 0;
  double character_coverage = 1.0;
  int seed_size_factor = 4;
  int max_piece_length = 16;
  double shrink_factor = 0.75;
  int em_iterations = 2;
  bool split_by_whitespace = true;
  std::vector<std::string> reserved_pieces;
};

// Returns pieces ordered by log probability, highest first.
absl::StatusOr<Model> Train(const std::vector<std::string>& sentences,
                            const TrainOptions& options);

}  // namespace unigram
}  // namespace subpiece

#endif  // SUBPIECE_UNIGRAM_MODEL_H_
