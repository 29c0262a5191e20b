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

#include "subpiece/processor.h"

#include "absl/status/status.h"
#include "fmt/format.h"
#include "subpiece/unicode.h"

namespace subpiece {

absl::StatusOr<Processor> Processor::Load(const std::string& path) {
  auto bytes = ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  return FromSerialized(*bytes);
}

absl::StatusOr<Processor> Processor::FromSerialized(std::string_view bytes) {
  auto bundle = Deserialize(bytes);
  if (!bundle.ok()) return bundle.status();
  return FromBundle(*std::move(bundle));
}

absl::StatusOr<Processor> Processor::FromBundle(ModelBundle bundle) {
  auto normalizer = Normalizer::CreateMaterialized(bundle.normalizer);
  if (!normalizer.ok()) return normalizer.status();
  auto vocab = Vocabulary::Build(bundle.pieces, bundle.specials,
                                 bundle.user_defined_symbols);
  if (!vocab.ok()) return vocab.status();

  std::variant<bpe::Model, unigram::Model> model;
  if (bundle.type == ModelType::kBpe) {
    std::vector<std::string> pieces;
    pieces.reserve(bundle.pieces.size());
    for (const auto& p : bundle.pieces) pieces.push_back(p.piece);
    auto bpe_model = bpe::Model::Create(std::move(pieces), bundle.merges);
    if (!bpe_model.ok()) return bpe_model.status();
    model = *std::move(bpe_model);
  } else {
    if (!bundle.merges.empty()) {
      return absl::DataLossError("unigram model carries BPE merges");
    }
    std::vector<unigram::Piece> pieces;
    pieces.reserve(bundle.pieces.size());
    for (const auto& p : bundle.pieces) pieces.push_back({p.piece, p.score});
    auto unigram_model = unigram::Model::Create(std::move(pieces));
    if (!unigram_model.ok()) return unigram_model.status();
    model = *std::move(unigram_model);
  }
  return Processor(std::move(bundle), *std::move(normalizer),
                   *std::move(vocab), std::move(model));
}

absl::StatusOr<std::string> Processor::Normalize(std::string_view text) const {
  return normalizer_.Normalize(text);
}

absl::StatusOr<std::vector<std::string>> Processor::EncodeAsPieces(
    std::string_view text) const {
  auto normalized = normalizer_.Normalize(text);
  if (!normalized.ok()) return normalized.status();
  const std::vector<std::string_view> views = std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, bpe::Model>) {
          return m.SegmentHeap(*normalized);
        } else {
          return m.Viterbi(*normalized);
        }
      },
      model_);
  return std::vector<std::string>(views.begin(), views.end());
}

std::vector<int> Processor::ToIds(const std::vector<std::string>& pieces) const {
  std::vector<int> ids;
  ids.reserve(pieces.size());
  for (const auto& piece : pieces) {
    const int id = vocab_.PieceToId(piece);
    // Only trained pieces are reachable from plain text.
    ids.push_back(vocab_.Type(id) == PieceType::kNormal ? id : vocab_.unk_id());
  }
  return ids;
}

absl::StatusOr<std::vector<int>> Processor::EncodeAsIds(
    std::string_view text) const {
  auto pieces = EncodeAsPieces(text);
  if (!pieces.ok()) return pieces.status();
  return ToIds(*pieces);
}

absl::StatusOr<std::vector<std::string>> Processor::SampleEncodeAsPieces(
    std::string_view text, int nbest, double alpha, Random* rng) const {
  const auto* model = std::get_if<unigram::Model>(&model_);
  if (model == nullptr) {
    return absl::FailedPreconditionError(
        "subword sampling requires a unigram model");
  }
  auto normalized = normalizer_.Normalize(text);
  if (!normalized.ok()) return normalized.status();
  auto views = model->Sample(*normalized, nbest, alpha, rng);
  if (!views.ok()) return views.status();
  return std::vector<std::string>(views->begin(), views->end());
}

absl::StatusOr<std::vector<int>> Processor::SampleEncodeAsIds(
    std::string_view text, int nbest, double alpha, Random* rng) const {
  auto pieces = SampleEncodeAsPieces(text, nbest, alpha, rng);
  if (!pieces.ok()) return pieces.status();
  return ToIds(*pieces);
}

namespace {

std::string Detokenize(std::string_view joined, bool strip_dummy_prefix) {
  std::string text = unicode::ReplaceAll(joined, kSpaceSymbolUtf8, " ");
  if (strip_dummy_prefix && !text.empty() && text[0] == ' ') text.erase(0, 1);
  return text;
}

}  // namespace

std::string Processor::DecodePieces(std::span<const std::string> pieces) const {
  std::string joined;
  for (const auto& piece : pieces) {
    if (vocab_.IsControl(vocab_.PieceToId(piece))) continue;
    joined += piece;
  }
  return Detokenize(joined, normalizer_.spec().add_dummy_prefix);
}

absl::StatusOr<std::string> Processor::DecodeIds(std::span<const int> ids) const {
  std::string joined;
  for (int id : ids) {
    auto piece = vocab_.IdToPiece(id);
    if (!piece.ok()) return piece.status();
    if (vocab_.IsControl(id)) continue;
    if (vocab_.IsUnknown(id)) {
      joined += vocab_.specials().unk_surface;
    } else {
      joined += *piece;
    }
  }
  return Detokenize(joined, normalizer_.spec().add_dummy_prefix);
}

}  // namespace subpiece
