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

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "fmt/format.h"
#include "corpus_util.h"
#include "subpiece/string_util.h"
#include "subpiece/unicode.h"
#include "subpiece/unigram_model.h"

namespace subpiece {
namespace unigram {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Prefix doubling with counting sorts, O(n log n). `s` holds symbols in
// [0, alphabet).
std::vector<int> BuildSuffixArray(const std::vector<int>& s, int alphabet) {
  const int n = static_cast<int>(s.size());
  std::vector<int> sa(n), rank(n), tmp(n), second(n);
  if (n == 0) return sa;
  {
    std::vector<int> bucket(alphabet + 1, 0);
    for (int c : s) ++bucket[c + 1];
    for (int i = 0; i < alphabet; ++i) bucket[i + 1] += bucket[i];
    for (int i = 0; i < n; ++i) sa[bucket[s[i]]++] = i;
    rank[sa[0]] = 0;
    for (int i = 1; i < n; ++i) {
      rank[sa[i]] = rank[sa[i - 1]] + (s[sa[i]] != s[sa[i - 1]]);
    }
  }
  std::vector<int> count;
  for (int k = 1; rank[sa[n - 1]] < n - 1; k <<= 1) {
    // Order by the second key: suffixes without one come first.
    int p = 0;
    for (int i = n - k; i < n; ++i) second[p++] = i;
    for (int i = 0; i < n; ++i) {
      if (sa[i] >= k) second[p++] = sa[i] - k;
    }
    // Stable counting sort by the first key.
    const int classes = rank[sa[n - 1]] + 1;
    count.assign(classes + 1, 0);
    for (int i = 0; i < n; ++i) ++count[rank[i] + 1];
    for (int i = 0; i < classes; ++i) count[i + 1] += count[i];
    for (int i = 0; i < n; ++i) sa[count[rank[second[i]]]++] = second[i];
    tmp[sa[0]] = 0;
    for (int i = 1; i < n; ++i) {
      const int a = sa[i - 1], b = sa[i];
      const int a2 = a + k < n ? rank[a + k] : -1;
      const int b2 = b + k < n ? rank[b + k] : -1;
      tmp[b] = tmp[a] + (rank[a] != rank[b] || a2 != b2);
    }
    rank.swap(tmp);
  }
  return sa;
}

// Kasai et al.: lcp[i] = LCP(suffix sa[i - 1], suffix sa[i]); lcp[0] = 0.
std::vector<int> BuildLcp(const std::vector<int>& s, const std::vector<int>& sa) {
  const int n = static_cast<int>(s.size());
  std::vector<int> rank(n), lcp(n, 0);
  for (int i = 0; i < n; ++i) rank[sa[i]] = i;
  int h = 0;
  for (int i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const int j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
    lcp[rank[i]] = h;
    if (h > 0) --h;
  }
  return lcp;
}

struct Candidate {
  int64_t score;
  int64_t count;
  std::string text;
};

// True if `a` ranks above `b`.
bool Outranks(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.text < b.text;
}

absl::StatusOr<std::vector<std::pair<std::string, int64_t>>> SeedFromFragments(
    const std::vector<std::string_view>& fragments, int seed_size,
    const SeedOptions& options) {
  if (seed_size <= 0) {
    return absl::InvalidArgumentError("seed_size must be positive");
  }
  // Code points of all fragments, each followed by a separator.
  std::vector<char32_t> text;
  std::string joined;
  std::vector<size_t> offsets;
  for (std::string_view fragment : fragments) {
    auto decoded = unicode::DecodeUtf8(fragment);
    if (!decoded.ok()) return decoded.status();
    for (char32_t c : *decoded) {
      offsets.push_back(joined.size());
      unicode::AppendUtf8(c, &joined);
      text.push_back(c);
    }
    offsets.push_back(joined.size());
    joined.push_back('\n');
    text.push_back(0xFFFFFFFF);
  }
  offsets.push_back(joined.size());
  const int n = static_cast<int>(text.size());

  // Characters.
  absl::flat_hash_map<char32_t, int64_t> char_counts;
  for (char32_t c : text) {
    if (c != 0xFFFFFFFF) ++char_counts[c];
  }
  if (char_counts.empty()) {
    return absl::InvalidArgumentError("training corpus is empty");
  }
  std::vector<std::pair<std::string, int64_t>> seeds;
  for (const auto& [c, count] : char_counts) {
    seeds.emplace_back(unicode::EncodeUtf8(c), count);
  }
  std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (seed_size < static_cast<int>(seeds.size())) {
    return absl::InvalidArgumentError(fmt::format(
        "seed_size {} is smaller than the {} distinct characters", seed_size,
        seeds.size()));
  }
  const size_t budget = seed_size - seeds.size();
  if (budget == 0) return seeds;

  // Dense alphabet: separator is 0, characters sorted by code point from 1.
  std::vector<char32_t> alphabet;
  for (const auto& [c, count] : char_counts) alphabet.push_back(c);
  std::sort(alphabet.begin(), alphabet.end());
  std::vector<int> symbols(n);
  for (int i = 0; i < n; ++i) {
    symbols[i] = text[i] == 0xFFFFFFFF
                     ? 0
                     : 1 + static_cast<int>(std::lower_bound(alphabet.begin(),
                                                             alphabet.end(),
                                                             text[i]) -
                                            alphabet.begin());
  }

  // limit[p]: longest admissible substring starting at p.
  std::vector<int> limit(n, 0);
  int next_stop = n;   // next separator
  int next_space = n;  // next U+2581 or separator strictly after p
  for (int p = n - 1; p >= 0; --p) {
    if (text[p] == 0xFFFFFFFF) {
      next_stop = p;
      next_space = p;
      continue;
    }
    int cap = std::min(options.max_piece_length, next_stop - p);
    if (options.split_by_whitespace) cap = std::min(cap, next_space - p);
    limit[p] = cap;
    if (text[p] == kSpaceSymbol) next_space = p;
  }

  const StringSet reserved(
      options.reserved_pieces.begin(), options.reserved_pieces.end());
  // Min-heap of the best `budget` candidates; the weakest is on top.
  auto weaker = [](const Candidate& a, const Candidate& b) {
    return Outranks(a, b);
  };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(weaker)> best(
      weaker);
  auto offer = [&](int pos, int length, int64_t freq) {
    if (length < 2) return;
    const int64_t score = freq * length;
    if (best.size() == budget && score < best.top().score) return;
    Candidate cand{score, freq,
                   joined.substr(offsets[pos],
                                 offsets[pos + length] - offsets[pos])};
    if (reserved.contains(cand.text)) return;
    if (best.size() < budget) {
      best.push(std::move(cand));
    } else if (Outranks(cand, best.top())) {
      best.pop();
      best.push(std::move(cand));
    }
  };

  const std::vector<int> sa =
      BuildSuffixArray(symbols, static_cast<int>(alphabet.size()) + 1);
  std::vector<int> lcp = BuildLcp(symbols, sa);
  lcp.push_back(0);

  // Leaves: lengths beyond both neighbours' LCP occur once.
  for (int i = 0; i < n; ++i) {
    const int p = sa[i];
    for (int len = std::max(lcp[i], lcp[i + 1]) + 1; len <= limit[p]; ++len) {
      offer(p, len, 1);
    }
  }
  // Internal nodes: bottom-up traversal of LCP intervals. Lengths in
  // (parent_lcp, lcp] share the interval's frequency.
  struct Interval {
    int lcp;
    int lb;
  };
  std::vector<Interval> stack{{0, 0}};
  for (int i = 1; i <= n; ++i) {
    int lb = i - 1;
    while (lcp[i] < stack.back().lcp) {
      const Interval top = stack.back();
      stack.pop_back();
      lb = top.lb;
      const int parent = std::max(lcp[i], stack.back().lcp);
      const int64_t freq = i - top.lb;
      const int p = sa[top.lb];
      for (int len = parent + 1; len <= std::min(top.lcp, limit[p]); ++len) {
        offer(p, len, freq);
      }
    }
    if (lcp[i] > stack.back().lcp) stack.push_back({lcp[i], lb});
  }

  std::vector<Candidate> picked;
  while (!best.empty()) {
    picked.push_back(best.top());
    best.pop();
  }
  std::reverse(picked.begin(), picked.end());
  for (auto& cand : picked) seeds.emplace_back(std::move(cand.text), cand.count);
  return seeds;
}

WeightedCorpus Dedup(std::vector<std::string_view> items) {
  std::sort(items.begin(), items.end());
  WeightedCorpus corpus;
  for (std::string_view item : items) {
    if (!corpus.empty() && corpus.back().first == item) {
      ++corpus.back().second;
    } else {
      corpus.emplace_back(std::string(item), 1);
    }
  }
  return corpus;
}

bool IsSingleChar(std::string_view piece) {
  return !piece.empty() &&
         unicode::OneCharLen(static_cast<unsigned char>(piece[0])) ==
             piece.size();
}

// Renormalizes so that sum(exp(log_prob)) == 1.
std::vector<Piece> Renormalize(std::vector<Piece> pieces) {
  double log_total = kNegInf;
  for (const auto& p : pieces) log_total = LogSumExp(log_total, p.log_prob);
  for (auto& p : pieces) p.log_prob = std::min(0.0, p.log_prob - log_total);
  return pieces;
}

}  // namespace

WeightedCorpus MakeWeightedCorpus(const std::vector<std::string>& sentences) {
  return Dedup(std::vector<std::string_view>(sentences.begin(), sentences.end()));
}

absl::StatusOr<std::vector<std::pair<std::string, int64_t>>> MakeSeedVocab(
    const std::vector<std::string>& sentences, int seed_size,
    const SeedOptions& options) {
  return SeedFromFragments(
      std::vector<std::string_view>(sentences.begin(), sentences.end()),
      seed_size, options);
}

absl::StatusOr<EmResult> EmStep(const Model& model,
                                const WeightedCorpus& corpus) {
  std::vector<double> counts(model.size(), 0.0);
  double log_likelihood = 0.0;
  for (const auto& [sentence, freq] : corpus) {
    const Lattice lattice(sentence, model);
    double log_z = 0.0;
    const std::vector<double> marginals = lattice.Marginals(&log_z);
    log_likelihood += static_cast<double>(freq) * log_z;
    for (size_t i = 0; i < marginals.size(); ++i) {
      const int piece = lattice.nodes()[i].piece;
      if (piece >= 0) counts[piece] += static_cast<double>(freq) * marginals[i];
    }
  }
  double total = 0.0;
  for (double c : counts) total += c;
  if (!(total > 0.0)) {
    return absl::InvalidArgumentError(
        "EM step observed no piece occurrences in the corpus");
  }
  std::vector<Piece> pieces = model.pieces();
  for (size_t i = 0; i < pieces.size(); ++i) {
    pieces[i].log_prob =
        counts[i] > 0.0 ? std::min(0.0, std::log(counts[i] / total)) : kNegInf;
  }
  auto updated = Model::Create(std::move(pieces));
  if (!updated.ok()) return updated.status();
  return EmResult{*std::move(updated), log_likelihood};
}

absl::StatusOr<EmResult> EmStep(const Model& model,
                                const std::vector<std::string>& sentences) {
  return EmStep(model, MakeWeightedCorpus(sentences));
}

absl::StatusOr<Model> PruneVocab(const Model& model,
                                 const WeightedCorpus& corpus, int target_size,
                                 const PruneOptions& options) {
  if (!(options.shrink_factor > 0.0 && options.shrink_factor < 1.0)) {
    return absl::InvalidArgumentError("shrink_factor must be in (0, 1)");
  }
  int num_chars = 0;
  for (const auto& p : model.pieces()) num_chars += IsSingleChar(p.text);
  if (target_size < num_chars || target_size <= 0) {
    return absl::InvalidArgumentError(fmt::format(
        "target size {} is below the {} single-character pieces", target_size,
        num_chars));
  }

  Model current = model;
  auto run_em = [&]() -> absl::Status {
    for (int i = 0; i < options.em_iterations; ++i) {
      auto step = EmStep(current, corpus);
      if (!step.ok()) return step.status();
      current = std::move(step->model);
    }
    return absl::OkStatus();
  };

  while (static_cast<int>(current.size()) > target_size) {
    if (absl::Status s = run_em(); !s.ok()) return s;
    const auto& pieces = current.pieces();

    // After EM, exp(log_prob) is the normalized expected count.
    std::vector<double> freq(pieces.size());
    for (size_t i = 0; i < pieces.size(); ++i) {
      freq[i] = std::exp(pieces[i].log_prob);
    }
    struct Scored {
      double loss;
      int index;
    };
    std::vector<Scored> removable;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
      if (IsSingleChar(pieces[i].text)) continue;
      const double f = freq[i];
      if (f <= 0.0) {
        removable.push_back({kNegInf, i});
        continue;
      }
      // Likelihood change if occurrences of piece i were re-segmented into
      // its best alternative.
      const std::vector<int> alternatives =
          current.ViterbiIds(pieces[i].text, i, nullptr);
      double loss = std::numeric_limits<double>::infinity();
      if (std::find(alternatives.begin(), alternatives.end(), -1) ==
          alternatives.end()) {
        const double logprob_piece = std::log(f);
        const double logsum_alt =
            std::log(1.0 + f * (static_cast<double>(alternatives.size()) - 1.0));
        double logprob_alt = 0.0;
        for (int alt : alternatives) {
          logprob_alt += std::log(freq[alt] + f) - logsum_alt;
        }
        loss = f * (logprob_piece - logprob_alt);
      }
      removable.push_back({loss, i});
    }
    std::sort(removable.begin(), removable.end(),
              [&](const Scored& a, const Scored& b) {
                if (a.loss != b.loss) return a.loss < b.loss;
                return pieces[a.index].text < pieces[b.index].text;
              });

    const int size = static_cast<int>(pieces.size());
    int new_size = std::max(
        target_size, static_cast<int>(std::floor(size * options.shrink_factor)));
    new_size = std::min(new_size, size - 1);
    const int to_remove =
        std::min<int>(size - new_size, static_cast<int>(removable.size()));
    if (to_remove <= 0) break;
    std::vector<bool> drop(pieces.size(), false);
    for (int k = 0; k < to_remove; ++k) drop[removable[k].index] = true;
    std::vector<Piece> kept;
    for (size_t i = 0; i < pieces.size(); ++i) {
      if (!drop[i]) kept.push_back(pieces[i]);
    }
    auto next = Model::Create(Renormalize(std::move(kept)));
    if (!next.ok()) return next.status();
    current = *std::move(next);
  }
  if (absl::Status s = run_em(); !s.ok()) return s;
  return current;
}

absl::StatusOr<Model> Train(const std::vector<std::string>& sentences,
                            const TrainOptions& options) {
  auto inventory =
      internal::CollectChars(sentences, options.character_coverage);
  if (!inventory.ok()) return inventory.status();
  const int num_chars = static_cast<int>(inventory->chars.size());
  const int target = options.vocab_size - options.meta_symbol_count;
  if (options.meta_symbol_count < 0 || target <= num_chars) {
    return absl::InvalidArgumentError(fmt::format(
        "vocab_size {} is unreachable: it must exceed {} characters + {} meta "
        "symbols",
        options.vocab_size, num_chars, options.meta_symbol_count));
  }

  std::vector<std::string_view> fragments;
  for (const auto& sentence : sentences) {
    for (std::string_view f :
         internal::SplitFragments(sentence, *inventory, false)) {
      fragments.push_back(f);
    }
  }
  SeedOptions seed_options;
  seed_options.max_piece_length = options.max_piece_length;
  seed_options.split_by_whitespace = options.split_by_whitespace;
  seed_options.reserved_pieces = options.reserved_pieces;
  const int64_t seed_size =
      std::max<int64_t>(target, int64_t{options.seed_size_factor} * target);
  auto seeds = SeedFromFragments(
      fragments, static_cast<int>(std::min<int64_t>(seed_size, 1 << 30)),
      seed_options);
  if (!seeds.ok()) return seeds.status();
  if (static_cast<int>(seeds->size()) < target) {
    return absl::ResourceExhaustedError(fmt::format(
        "vocab_size {} is unreachable: the corpus supports at most {} "
        "({} pieces + {} meta symbols)",
        options.vocab_size,
        static_cast<int>(seeds->size()) + options.meta_symbol_count,
        seeds->size(), options.meta_symbol_count));
  }

  // Sentences factor into independent words at U+2581 when pieces cannot
  // contain it internally, so EM runs on deduplicated words.
  std::vector<std::string_view> units;
  for (std::string_view f : fragments) {
    if (!options.split_by_whitespace) {
      units.push_back(f);
      continue;
    }
    size_t begin = 0;
    for (size_t pos = f.find(kSpaceSymbolUtf8, 1); pos != std::string_view::npos;
         pos = f.find(kSpaceSymbolUtf8, pos + 1)) {
      units.push_back(f.substr(begin, pos - begin));
      begin = pos;
    }
    units.push_back(f.substr(begin));
  }
  const WeightedCorpus corpus = Dedup(std::move(units));

  std::vector<Piece> initial;
  double total = 0.0;
  for (const auto& [text, count] : *seeds) {
    total += static_cast<double>(count) * unicode::CharCount(text);
  }
  for (const auto& [text, count] : *seeds) {
    initial.push_back(
        {text, std::log(static_cast<double>(count) * unicode::CharCount(text) /
                        total)});
  }
  auto model = Model::Create(Renormalize(std::move(initial)));
  if (!model.ok()) return model.status();

  PruneOptions prune;
  prune.shrink_factor = options.shrink_factor;
  prune.em_iterations = options.em_iterations;
  auto pruned = PruneVocab(*model, corpus, target, prune);
  if (!pruned.ok()) return pruned.status();

  // Unused pieces get a finite floor so every piece stays scoreable.
  std::vector<Piece> pieces = pruned->pieces();
  double floor = 0.0;
  for (const auto& p : pieces) {
    if (std::isfinite(p.log_prob)) floor = std::min(floor, p.log_prob);
  }
  for (auto& p : pieces) {
    if (!std::isfinite(p.log_prob)) p.log_prob = floor - kUnknownPenalty;
  }
  pieces = Renormalize(std::move(pieces));
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) {
                     if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
                     return a.text < b.text;
                   });
  return Model::Create(std::move(pieces));
}

}  // namespace unigram
}  // namespace subpiece
