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

#ifndef SUBPIECE_PROCESSOR_H_
#define SUBPIECE_PROCESSOR_H_

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "subpiece/bpe_model.h"
#include "subpiece/model_store.h"
#include "subpiece/normalizer.h"
#include "subpiece/random.h"
#include "subpiece/unigram_model.h"
#include "subpiece/vocab.h"

namespace subpiece {

// Encoder and decoder over one loaded model. Immutable once constructed, so
// a Processor may be shared by any number of threads; sampling takes the
// caller's random source.
class Processor {
 public:
  static absl::StatusOr<Processor> Load(const std::string& path);
  static absl::StatusOr<Processor> FromSerialized(std::string_view bytes);
  static absl::StatusOr<Processor> FromBundle(ModelBundle bundle);

  // InvalidArgument on invalid UTF-8.
  absl::StatusOr<std::string> Normalize(std::string_view text) const;

  absl::StatusOr<std::vector<std::string>> EncodeAsPieces(
      std::string_view text) const;
  absl::StatusOr<std::vector<int>> EncodeAsIds(std::string_view text) const;

  // Unigram models only; see unigram::Model::Sample for nbest and alpha.
  absl::StatusOr<std::vector<std::string>> SampleEncodeAsPieces(
      std::string_view text, int nbest, double alpha, Random* rng) const;
  absl::StatusOr<std::vector<int>> SampleEncodeAsIds(std::string_view text,
                                                     int nbest, double alpha,
                                                     Random* rng) const;

  // Concatenates, turns U+2581 back into spaces and drops the dummy prefix.
  // Control symbols (<s>, </s>, <pad>) are dropped.
  std::string DecodePieces(std::span<const std::string> pieces) const;
  // Like DecodePieces; unk_id renders as specials().unk_surface. OutOfRange
  // for ids outside the vocabulary.
  absl::StatusOr<std::string> DecodeIds(std::span<const int> ids) const;

  const Vocabulary& vocab() const { return vocab_; }
  const ModelBundle& bundle() const { return bundle_; }
  const NormalizerSpec& normalizer_spec() const { return normalizer_.spec(); }
  ModelType model_type() const { return bundle_.type; }

 private:
  Processor(ModelBundle bundle, Normalizer normalizer, Vocabulary vocab,
            std::variant<bpe::Model, unigram::Model> model)
      : bundle_(std::move(bundle)),
        normalizer_(std::move(normalizer)),
        vocab_(std::move(vocab)),
        model_(std::move(model)) {}

  std::vector<int> ToIds(const std::vector<std::string>& pieces) const;

  ModelBundle bundle_;
  Normalizer normalizer_;
  Vocabulary vocab_;
  std::variant<bpe::Model, unigram::Model> model_;
};

}  // namespace subpiece

#endif  // SUBPIECE_PROCESSOR_H_
