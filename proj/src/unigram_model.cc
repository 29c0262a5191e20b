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

#include "subpiece/unigram_model.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "fmt/format.h"
#include "subpiece/unicode.h"

namespace subpiece {
namespace unigram {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Compares two partial Viterbi results. Returns true if (score, pieces,
// first_len) beats (other...) under the tie-breaking rules.
bool Better(double score, int pieces, int first_len, double other_score,
            int other_pieces, int other_first_len) {
  if (std::abs(score - other_score) > kScoreTieEpsilon) {
    return score > other_score;
  }
  if (pieces != other_pieces) return pieces < other_pieces;
  return first_len > other_first_len;
}

}  // namespace

double LogSumExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

absl::StatusOr<Model> Model::Create(std::vector<Piece> pieces) {
  Model model;
  model.min_log_prob_ = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pieces.size(); ++i) {
    const Piece& piece = pieces[i];
    if (piece.text.empty() || !unicode::IsStructurallyValidUtf8(piece.text)) {
      return absl::InvalidArgumentError(
          fmt::format("invalid unigram piece \"{}\"", piece.text));
    }
    if (std::isnan(piece.log_prob) || piece.log_prob > 0.0) {
      return absl::InvalidArgumentError(fmt::format(
          "piece \"{}\" has invalid log probability {:g}", piece.text,
          piece.log_prob));
    }
    if (!model.index_.emplace(piece.text, static_cast<int>(i)).second) {
      return absl::AlreadyExistsError(
          fmt::format("duplicate unigram piece \"{}\"", piece.text));
    }
    if (std::isfinite(piece.log_prob)) {
      model.min_log_prob_ = std::min(model.min_log_prob_, piece.log_prob);
    }
    int32_t node = 0;
    for (unsigned char byte : piece.text) {
      const auto [it, inserted] = model.edges_.try_emplace(
          EdgeKey(node, byte), static_cast<int32_t>(model.accept_.size()));
      if (inserted) model.accept_.push_back(-1);
      node = it->second;
    }
    model.accept_[node] = static_cast<int32_t>(i);
  }
  if (!std::isfinite(model.min_log_prob_)) model.min_log_prob_ = 0.0;
  model.pieces_ = std::move(pieces);
  return model;
}

int Model::PieceIndex(std::string_view piece) const {
  const auto it = index_.find(piece);
  return it == index_.end() ? -1 : it->second;
}

Lattice::Lattice(std::string_view text, const Model& model, int excluded)
    : text_(text) {
  for (size_t pos = 0; pos < text.size();) {
    offsets_.push_back(pos);
    pos += std::min(unicode::OneCharLen(static_cast<unsigned char>(text[pos])),
                    text.size() - pos);
  }
  offsets_.push_back(text.size());
  const int len = size();
  begin_.resize(len + 1);
  end_.resize(len + 1);

  int char_end = 0;  // code point index reached while walking a prefix
  for (int begin = 0; begin < len; ++begin) {
    const size_t start = offsets_[begin];
    bool has_single = false;
    char_end = begin;
    model.ForEachPrefix(text.substr(start), [&](int piece, size_t bytes) {
      while (offsets_[char_end] < start + bytes) ++char_end;
      // A prefix that ends inside a code point is not a valid span.
      if (offsets_[char_end] != start + bytes || piece == excluded) return;
      if (char_end == begin + 1) has_single = true;
      begin_[begin].push_back(static_cast<int>(nodes_.size()));
      end_[char_end].push_back(static_cast<int>(nodes_.size()));
      nodes_.push_back(Node{begin, char_end, piece, model.pieces()[piece].log_prob});
    });
    if (!has_single) {
      begin_[begin].push_back(static_cast<int>(nodes_.size()));
      end_[begin + 1].push_back(static_cast<int>(nodes_.size()));
      nodes_.push_back(Node{begin, begin + 1, -1, model.unknown_log_prob()});
    }
  }
}

std::string_view Lattice::surface(const Node& node) const {
  return text_.substr(offsets_[node.begin],
                      offsets_[node.end] - offsets_[node.begin]);
}

std::vector<double> Lattice::Forward(double theta) const {
  const int len = size();
  std::vector<double> alpha(len + 1, kNegInf);
  alpha[0] = 0.0;
  for (int pos = 1; pos <= len; ++pos) {
    for (int id : end_[pos]) {
      const Node& node = nodes_[id];
      alpha[pos] = LogSumExp(alpha[pos], alpha[node.begin] + theta * node.score);
    }
  }
  return alpha;
}

std::vector<double> Lattice::Backward(double theta) const {
  const int len = size();
  std::vector<double> beta(len + 1, kNegInf);
  beta[len] = 0.0;
  for (int pos = len - 1; pos >= 0; --pos) {
    for (int id : begin_[pos]) {
      const Node& node = nodes_[id];
      beta[pos] = LogSumExp(beta[pos], theta * node.score + beta[node.end]);
    }
  }
  return beta;
}

std::vector<double> Lattice::Marginals(double* log_z) const {
  const std::vector<double> alpha = Forward();
  const std::vector<double> beta = Backward();
  *log_z = alpha[size()];
  std::vector<double> marginals(nodes_.size(), 0.0);
  if (size() == 0) return marginals;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    marginals[i] =
        std::exp(alpha[node.begin] + node.score + beta[node.end] - *log_z);
  }
  return marginals;
}

namespace {

// Backward DP over suffixes; returns the node ids of the best path.
std::vector<int> BestPath(const Lattice& lattice, double* score) {
  const int len = lattice.size();
  // best_*[pos] describe the best segmentation of the suffix starting at pos.
  std::vector<double> best_score(len + 1, 0.0);
  std::vector<int> best_pieces(len + 1, 0);
  std::vector<int> best_node(len + 1, -1);
  for (int pos = len - 1; pos >= 0; --pos) {
    for (int id : lattice.begin_nodes(pos)) {
      const auto& node = lattice.nodes()[id];
      const double s = node.score + best_score[node.end];
      const int count = 1 + best_pieces[node.end];
      if (best_node[pos] < 0 ||
          Better(s, count, node.end - node.begin, best_score[pos],
                 best_pieces[pos], lattice.nodes()[best_node[pos]].end - pos)) {
        best_score[pos] = s;
        best_pieces[pos] = count;
        best_node[pos] = id;
      }
    }
  }
  std::vector<int> path;
  for (int pos = 0; pos < len; pos = lattice.nodes()[best_node[pos]].end) {
    path.push_back(best_node[pos]);
  }
  if (score != nullptr) *score = best_score[0];
  return path;
}

}  // namespace

std::vector<int> Model::ViterbiIds(std::string_view text, int excluded,
                                   double* score) const {
  const Lattice lattice(text, *this, excluded);
  std::vector<int> ids;
  for (int id : BestPath(lattice, score)) {
    ids.push_back(lattice.nodes()[id].piece);
  }
  return ids;
}

std::vector<std::string_view> Model::Viterbi(std::string_view text) const {
  const Lattice lattice(text, *this);
  std::vector<std::string_view> out;
  for (int id : BestPath(lattice, nullptr)) {
    out.push_back(lattice.surface(lattice.nodes()[id]));
  }
  return out;
}

std::vector<std::pair<std::vector<std::string_view>, double>> Model::NBest(
    std::string_view text, int n) const {
  struct Hyp {
    double score;
    int node;  // last node, -1 at position 0
    int prev;  // index into hyps[node.begin]
  };
  const Lattice lattice(text, *this);
  const int len = lattice.size();
  std::vector<std::vector<Hyp>> hyps(len + 1);
  hyps[0].push_back(Hyp{0.0, -1, -1});
  for (int pos = 1; pos <= len; ++pos) {
    std::vector<Hyp>& here = hyps[pos];
    for (int id : lattice.end_nodes(pos)) {
      const auto& node = lattice.nodes()[id];
      const auto& from = hyps[node.begin];
      for (int k = 0; k < static_cast<int>(from.size()); ++k) {
        here.push_back(Hyp{from[k].score + node.score, id, k});
      }
    }
    // Stable order: score, then node id, then predecessor rank.
    const auto order = [](const Hyp& a, const Hyp& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.node != b.node) return a.node < b.node;
      return a.prev < b.prev;
    };
    if (static_cast<int>(here.size()) > n) {
      std::partial_sort(here.begin(), here.begin() + n, here.end(), order);
      here.resize(n);
    } else {
      std::sort(here.begin(), here.end(), order);
    }
  }

  std::vector<std::pair<std::vector<std::string_view>, double>> results;
  for (int k = 0; k < static_cast<int>(hyps[len].size()); ++k) {
    std::vector<std::string_view> pieces;
    int pos = len;
    int rank = k;
    while (pos > 0) {
      const Hyp& hyp = hyps[pos][rank];
      const auto& node = lattice.nodes()[hyp.node];
      pieces.push_back(lattice.surface(node));
      pos = node.begin;
      rank = hyp.prev;
    }
    std::reverse(pieces.begin(), pieces.end());
    results.emplace_back(std::move(pieces), hyps[len][k].score);
  }
  if (len == 0) results.assign(1, {{}, 0.0});
  return results;
}

absl::StatusOr<std::vector<std::string_view>> Model::Sample(
    std::string_view text, int nbest, double alpha, Random* rng) const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        fmt::format("alpha must be a finite value >= 0, got {:g}", alpha));
  }
  if (nbest == 0 || nbest < -1) {
    return absl::InvalidArgumentError(
        fmt::format("nbest must be -1 or >= 1, got {}", nbest));
  }
  if (nbest >= 1) {
    auto candidates = NBest(text, nbest);
    double log_total = kNegInf;
    for (const auto& c : candidates) {
      log_total = LogSumExp(log_total, alpha * c.second);
    }
    const double u = rng->Uniform();
    double cumulative = 0.0;
    for (auto& c : candidates) {
      cumulative += std::exp(alpha * c.second - log_total);
      if (u < cumulative) return std::move(c.first);
    }
    return std::move(candidates.back().first);
  }

  // Forward filtering, backward sampling.
  const Lattice lattice(text, *this);
  const std::vector<double> forward = lattice.Forward(alpha);
  std::vector<std::string_view> out;
  for (int pos = lattice.size(); pos > 0;) {
    const auto& ends = lattice.end_nodes(pos);
    const double u = rng->Uniform();
    double cumulative = 0.0;
    int chosen = ends.back();
    for (int id : ends) {
      const auto& node = lattice.nodes()[id];
      cumulative +=
          std::exp(forward[node.begin] + alpha * node.score - forward[pos]);
      if (u < cumulative) {
        chosen = id;
        break;
      }
    }
    const auto& node = lattice.nodes()[chosen];
    out.push_back(lattice.surface(node));
    pos = node.begin;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace unigram
}  // namespace subpiece
