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
#include <queue>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "subpiece/string_util.h"
#include "fmt/format.h"
#include "corpus_util.h"
#include "subpiece/bpe_model.h"
#include "subpiece/unicode.h"

namespace subpiece {
namespace bpe {
namespace {

uint64_t PairKey(int left, int right) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(left)) << 32) |
         static_cast<uint32_t>(right);
}
int PairLeft(uint64_t key) { return static_cast<int>(key >> 32); }
int PairRight(uint64_t key) { return static_cast<int>(key & 0xFFFFFFFFu); }

class BpeTrainer {
 public:
  BpeTrainer(const TrainOptions& options) : options_(options) {}

  absl::StatusOr<Model> Run(const std::vector<std::string>& sentences);

 private:
  struct Entry {
    int64_t count;
    uint64_t pair;
  };

  int Intern(std::string_view symbol);
  void AddWordPairs(int word, int64_t sign);
  void ApplyMerge(uint64_t pair, int result);
  void Push(uint64_t pair);
  // True if `a` should be merged before `b`.
  bool Before(const Entry& a, const Entry& b) const;

  const TrainOptions& options_;
  std::vector<std::string> symbols_;
  StringMap<int> symbol_index_;
  std::vector<std::vector<int>> words_;
  std::vector<int64_t> word_freq_;
  absl::flat_hash_map<uint64_t, int64_t> pair_count_;
  // Words that contained the pair at some point. May hold stale entries.
  absl::flat_hash_map<uint64_t, std::vector<int>> pair_words_;
  absl::flat_hash_set<uint64_t> touched_;
  std::vector<Entry> heap_;
};

int BpeTrainer::Intern(std::string_view symbol) {
  const auto it = symbol_index_.find(symbol);
  if (it != symbol_index_.end()) return it->second;
  const int id = static_cast<int>(symbols_.size());
  symbols_.emplace_back(symbol);
  symbol_index_.emplace(symbols_.back(), id);
  return id;
}

bool BpeTrainer::Before(const Entry& a, const Entry& b) const {
  if (a.count != b.count) return a.count > b.count;
  const std::string& al = symbols_[PairLeft(a.pair)];
  const std::string& bl = symbols_[PairLeft(b.pair)];
  if (al != bl) return al < bl;
  return symbols_[PairRight(a.pair)] < symbols_[PairRight(b.pair)];
}

void BpeTrainer::Push(uint64_t pair) {
  const auto it = pair_count_.find(pair);
  if (it == pair_count_.end() || it->second <= 0) return;
  heap_.push_back(Entry{it->second, pair});
  std::push_heap(heap_.begin(), heap_.end(),
                 [this](const Entry& a, const Entry& b) { return Before(b, a); });
}

void BpeTrainer::AddWordPairs(int word, int64_t sign) {
  const std::vector<int>& syms = words_[word];
  for (size_t i = 0; i + 1 < syms.size(); ++i) {
    const uint64_t pair = PairKey(syms[i], syms[i + 1]);
    pair_count_[pair] += sign * word_freq_[word];
    touched_.insert(pair);
    if (sign > 0) pair_words_[pair].push_back(word);
  }
}

void BpeTrainer::ApplyMerge(uint64_t pair, int result) {
  const int left = PairLeft(pair);
  const int right = PairRight(pair);
  std::vector<int> candidates = std::move(pair_words_[pair]);
  pair_words_.erase(pair);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  for (int word : candidates) {
    std::vector<int>& syms = words_[word];
    bool present = false;
    for (size_t i = 0; i + 1 < syms.size() && !present; ++i) {
      present = syms[i] == left && syms[i + 1] == right;
    }
    if (!present) continue;
    AddWordPairs(word, -1);
    std::vector<int> merged;
    merged.reserve(syms.size());
    for (size_t i = 0; i < syms.size(); ++i) {
      if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
        merged.push_back(result);
        ++i;
      } else {
        merged.push_back(syms[i]);
      }
    }
    syms = std::move(merged);
    AddWordPairs(word, +1);
  }
}

absl::StatusOr<Model> BpeTrainer::Run(
    const std::vector<std::string>& sentences) {
  auto inventory =
      internal::CollectChars(sentences, options_.character_coverage);
  if (!inventory.ok()) return inventory.status();

  const int num_chars = static_cast<int>(inventory->chars.size());
  const int target = options_.vocab_size - options_.meta_symbol_count;
  if (options_.meta_symbol_count < 0 || target <= num_chars) {
    return absl::InvalidArgumentError(fmt::format(
        "vocab_size {} is unreachable: it must exceed {} characters + {} meta "
        "symbols",
        options_.vocab_size, num_chars, options_.meta_symbol_count));
  }

  for (const auto& [c, count] : inventory->chars) Intern(c);

  // Distinct words in byte order so symbol ids never depend on hashing.
  std::unordered_map<std::string_view, int64_t> word_counts;
  for (const auto& sentence : sentences) {
    for (std::string_view word :
         internal::SplitFragments(sentence, *inventory, true)) {
      ++word_counts[word];
    }
  }
  std::vector<std::pair<std::string_view, int64_t>> sorted_words(
      word_counts.begin(), word_counts.end());
  std::sort(sorted_words.begin(), sorted_words.end());
  for (const auto& [word, count] : sorted_words) {
    std::vector<int> syms;
    for (std::string_view c : unicode::SplitChars(word)) {
      syms.push_back(symbol_index_.find(c)->second);
    }
    words_.push_back(std::move(syms));
    word_freq_.push_back(count);
  }
  for (int w = 0; w < static_cast<int>(words_.size()); ++w) AddWordPairs(w, +1);
  for (uint64_t pair : touched_) Push(pair);
  touched_.clear();

  StringSet reserved(options_.reserved_pieces.begin(),
                                            options_.reserved_pieces.end());
  absl::flat_hash_set<uint64_t> blocked;
  std::vector<std::string> pieces;
  for (const auto& [c, count] : inventory->chars) pieces.push_back(c);
  std::vector<Merge> merges;
  auto pop = [this]() {
    std::pop_heap(heap_.begin(), heap_.end(), [this](const Entry& a,
                                                     const Entry& b) {
      return Before(b, a);
    });
    const Entry top = heap_.back();
    heap_.pop_back();
    return top;
  };

  while (static_cast<int>(pieces.size()) < target && !heap_.empty()) {
    const Entry top = pop();
    const auto it = pair_count_.find(top.pair);
    if (it == pair_count_.end() || it->second != top.count) continue;
    if (top.count < 2) break;
    if (blocked.contains(top.pair)) continue;
    std::string product =
        symbols_[PairLeft(top.pair)] + symbols_[PairRight(top.pair)];
    if (reserved.contains(product)) {
      blocked.insert(top.pair);
      continue;
    }
    const bool is_new = !symbol_index_.contains(product);
    const int result = Intern(product);
    merges.push_back(Merge{symbols_[PairLeft(top.pair)],
                           symbols_[PairRight(top.pair)],
                           static_cast<int>(merges.size())});
    if (is_new) pieces.push_back(std::move(product));
    ApplyMerge(top.pair, result);
    for (uint64_t pair : touched_) Push(pair);
    touched_.clear();
  }

  if (static_cast<int>(pieces.size()) < target) {
    return absl::ResourceExhaustedError(fmt::format(
        "vocab_size {} is unreachable: the corpus supports at most {} "
        "({} pieces + {} meta symbols)",
        options_.vocab_size,
        static_cast<int>(pieces.size()) + options_.meta_symbol_count,
        pieces.size(), options_.meta_symbol_count));
  }
  return Model::Create(std::move(pieces), std::move(merges));
}

}  // namespace

absl::StatusOr<Model> Train(const std::vector<std::string>& sentences,
                            const TrainOptions& options) {
  return BpeTrainer(options).Run(sentences);
}

}  // namespace bpe
}  // namespace subpiece
