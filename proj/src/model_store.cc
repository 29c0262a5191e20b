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

#include "subpiece/model_store.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "fmt/format.h"

namespace subpiece {
namespace {

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U16(uint16_t v) { Le(v, 2); }
  void U32(uint32_t v) { Le(v, 4); }
  void I32(int32_t v) { Le(static_cast<uint32_t>(v), 4); }
  void U64(uint64_t v) { Le(v, 8); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Str(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.append(s);
  }
  void Raw(std::string_view s) { out_.append(s); }
  std::string& data() { return out_; }

 private:
  void Le(uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  std::string out_;
};

// Bounds-checked little-endian reader. `base` is the absolute offset of the
// buffer within the file, used in error messages.
class Reader {
 public:
  Reader(std::string_view data, size_t base) : data_(data), base_(base) {}

  absl::Status U8(uint8_t* v) {
    uint64_t x;
    if (auto s = Le(1, &x); !s.ok()) return s;
    *v = static_cast<uint8_t>(x);
    return absl::OkStatus();
  }
  absl::Status U16(uint16_t* v) {
    uint64_t x;
    if (auto s = Le(2, &x); !s.ok()) return s;
    *v = static_cast<uint16_t>(x);
    return absl::OkStatus();
  }
  absl::Status U32(uint32_t* v) {
    uint64_t x;
    if (auto s = Le(4, &x); !s.ok()) return s;
    *v = static_cast<uint32_t>(x);
    return absl::OkStatus();
  }
  absl::Status I32(int32_t* v) {
    uint32_t x;
    if (auto s = U32(&x); !s.ok()) return s;
    *v = static_cast<int32_t>(x);
    return absl::OkStatus();
  }
  absl::Status U64(uint64_t* v) { return Le(8, v); }
  absl::Status F64(double* v) {
    uint64_t x;
    if (auto s = Le(8, &x); !s.ok()) return s;
    *v = std::bit_cast<double>(x);
    return absl::OkStatus();
  }
  absl::Status Str(std::string* v) {
    uint32_t len;
    if (auto s = U32(&len); !s.ok()) return s;
    if (auto s = Need(len); !s.ok()) return s;
    v->assign(data_.substr(pos_, len));
    pos_ += len;
    return absl::OkStatus();
  }
  absl::Status Bytes(size_t len, std::string_view* v) {
    if (auto s = Need(len); !s.ok()) return s;
    *v = data_.substr(pos_, len);
    pos_ += len;
    return absl::OkStatus();
  }
  // Element counts are bounded by the remaining bytes so corrupt counts
  // cannot trigger huge allocations.
  absl::Status Count(uint32_t* n, size_t min_element_size) {
    if (auto s = U32(n); !s.ok()) return s;
    if (static_cast<uint64_t>(*n) * min_element_size > data_.size() - pos_) {
      return Truncated();
    }
    return absl::OkStatus();
  }

  bool done() const { return pos_ == data_.size(); }
  size_t offset() const { return base_ + pos_; }

 private:
  absl::Status Truncated() const {
    return absl::DataLossError(fmt::format(
        "model file is truncated or corrupt at byte offset {}", offset()));
  }
  absl::Status Need(size_t n) const {
    if (n > data_.size() - pos_) return Truncated();
    return absl::OkStatus();
  }
  absl::Status Le(int bytes, uint64_t* v) {
    if (auto s = Need(bytes); !s.ok()) return s;
    uint64_t x = 0;
    for (int i = 0; i < bytes; ++i) {
      x |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    }
    pos_ += bytes;
    *v = x;
    return absl::OkStatus();
  }

  std::string_view data_;
  size_t base_;
  size_t pos_ = 0;
};

#define SUBPIECE_RETURN_IF_ERROR(expr) \
  do {                                 \
    absl::Status _status = (expr);     \
    if (!_status.ok()) return _status; \
  } while (0)

void WriteCodePoints(Writer* w, const std::u32string& cps) {
  w->U32(static_cast<uint32_t>(cps.size()));
  for (char32_t c : cps) w->U32(static_cast<uint32_t>(c));
}

absl::Status ReadCodePoints(Reader* r, std::u32string* cps) {
  uint32_t n;
  SUBPIECE_RETURN_IF_ERROR(r->Count(&n, 4));
  cps->resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t c;
    SUBPIECE_RETURN_IF_ERROR(r->U32(&c));
    (*cps)[i] = static_cast<char32_t>(c);
  }
  return absl::OkStatus();
}

absl::Status ReadBool(Reader* r, bool* v) {
  uint8_t b;
  SUBPIECE_RETURN_IF_ERROR(r->U8(&b));
  *v = b != 0;
  return absl::OkStatus();
}

absl::Status ReadSection(uint16_t tag, Reader* r, ModelBundle* bundle) {
  using namespace model_file;
  switch (tag) {
    case kNormalizerSpec: {
      NormalizerSpec& spec = bundle->normalizer;
      SUBPIECE_RETURN_IF_ERROR(r->Str(&spec.rule_name));
      SUBPIECE_RETURN_IF_ERROR(ReadBool(r, &spec.add_dummy_prefix));
      SUBPIECE_RETURN_IF_ERROR(ReadBool(r, &spec.remove_extra_whitespaces));
      return ReadBool(r, &spec.escape_whitespaces);
    }
    case kCharsMap: {
      uint32_t n;
      SUBPIECE_RETURN_IF_ERROR(r->Count(&n, 8));
      auto& rules = bundle->normalizer.rules;
      rules.resize(n);
      for (auto& rule : rules) {
        SUBPIECE_RETURN_IF_ERROR(ReadCodePoints(r, &rule.source));
        SUBPIECE_RETURN_IF_ERROR(ReadCodePoints(r, &rule.target));
      }
      return absl::OkStatus();
    }
    case kModelType: {
      uint8_t type;
      const size_t at = r->offset();
      SUBPIECE_RETURN_IF_ERROR(r->U8(&type));
      if (type != static_cast<uint8_t>(ModelType::kUnigram) &&
          type != static_cast<uint8_t>(ModelType::kBpe)) {
        return absl::DataLossError(fmt::format(
            "unknown model type {} at byte offset {}", type, at));
      }
      bundle->type = static_cast<ModelType>(type);
      return absl::OkStatus();
    }
    case kPieces: {
      uint32_t n;
      SUBPIECE_RETURN_IF_ERROR(r->Count(&n, 12));
      bundle->pieces.resize(n);
      for (auto& piece : bundle->pieces) {
        SUBPIECE_RETURN_IF_ERROR(r->Str(&piece.piece));
        SUBPIECE_RETURN_IF_ERROR(r->F64(&piece.score));
      }
      return absl::OkStatus();
    }
    case kMerges: {
      uint32_t n;
      SUBPIECE_RETURN_IF_ERROR(r->Count(&n, 8));
      bundle->merges.resize(n);
      for (uint32_t i = 0; i < n; ++i) {
        auto& merge = bundle->merges[i];
        SUBPIECE_RETURN_IF_ERROR(r->Str(&merge.left));
        SUBPIECE_RETURN_IF_ERROR(r->Str(&merge.right));
        merge.rank = static_cast<int>(i);
      }
      return absl::OkStatus();
    }
    case kSpecials: {
      SpecialSymbols& sp = bundle->specials;
      int32_t ids[4];
      for (int32_t& id : ids) SUBPIECE_RETURN_IF_ERROR(r->I32(&id));
      sp.unk_id = ids[0];
      sp.bos_id = ids[1];
      sp.eos_id = ids[2];
      sp.pad_id = ids[3];
      SUBPIECE_RETURN_IF_ERROR(r->Str(&sp.unk_piece));
      SUBPIECE_RETURN_IF_ERROR(r->Str(&sp.bos_piece));
      SUBPIECE_RETURN_IF_ERROR(r->Str(&sp.eos_piece));
      SUBPIECE_RETURN_IF_ERROR(r->Str(&sp.pad_piece));
      SUBPIECE_RETURN_IF_ERROR(r->Str(&sp.unk_surface));
      uint32_t n;
      SUBPIECE_RETURN_IF_ERROR(r->Count(&n, 4));
      bundle->user_defined_symbols.resize(n);
      for (auto& symbol : bundle->user_defined_symbols) {
        SUBPIECE_RETURN_IF_ERROR(r->Str(&symbol));
      }
      return absl::OkStatus();
    }
    case kTrainerParams: {
      uint32_t n;
      SUBPIECE_RETURN_IF_ERROR(r->Count(&n, 8));
      bundle->trainer_params.resize(n);
      for (auto& [key, value] : bundle->trainer_params) {
        SUBPIECE_RETURN_IF_ERROR(r->Str(&key));
        SUBPIECE_RETURN_IF_ERROR(r->Str(&value));
      }
      return absl::OkStatus();
    }
    default:
      return absl::OkStatus();
  }
}

}  // namespace

std::string Serialize(const ModelBundle& bundle) {
  using namespace model_file;
  Writer file;
  file.Raw(kMagic);
  file.U32(kFormatVersion);
  auto record = [&file](Tag tag, Writer& payload) {
    file.U16(tag);
    file.U64(payload.data().size());
    file.Raw(payload.data());
  };

  {
    Writer w;
    w.Str(bundle.normalizer.rule_name);
    w.U8(bundle.normalizer.add_dummy_prefix);
    w.U8(bundle.normalizer.remove_extra_whitespaces);
    w.U8(bundle.normalizer.escape_whitespaces);
    record(kNormalizerSpec, w);
  }
  {
    Writer w;
    w.U32(static_cast<uint32_t>(bundle.normalizer.rules.size()));
    for (const auto& rule : bundle.normalizer.rules) {
      WriteCodePoints(&w, rule.source);
      WriteCodePoints(&w, rule.target);
    }
    record(kCharsMap, w);
  }
  {
    Writer w;
    w.U8(static_cast<uint8_t>(bundle.type));
    record(kModelType, w);
  }
  {
    Writer w;
    w.U32(static_cast<uint32_t>(bundle.pieces.size()));
    for (const auto& piece : bundle.pieces) {
      w.Str(piece.piece);
      w.F64(piece.score);
    }
    record(kPieces, w);
  }
  {
    Writer w;
    w.U32(static_cast<uint32_t>(bundle.merges.size()));
    for (const auto& merge : bundle.merges) {
      w.Str(merge.left);
      w.Str(merge.right);
    }
    record(kMerges, w);
  }
  {
    const SpecialSymbols& sp = bundle.specials;
    Writer w;
    w.I32(sp.unk_id);
    w.I32(sp.bos_id);
    w.I32(sp.eos_id);
    w.I32(sp.pad_id);
    w.Str(sp.unk_piece);
    w.Str(sp.bos_piece);
    w.Str(sp.eos_piece);
    w.Str(sp.pad_piece);
    w.Str(sp.unk_surface);
    w.U32(static_cast<uint32_t>(bundle.user_defined_symbols.size()));
    for (const auto& symbol : bundle.user_defined_symbols) w.Str(symbol);
    record(kSpecials, w);
  }
  {
    Writer w;
    w.U32(static_cast<uint32_t>(bundle.trainer_params.size()));
    for (const auto& [key, value] : bundle.trainer_params) {
      w.Str(key);
      w.Str(value);
    }
    record(kTrainerParams, w);
  }
  return std::move(file.data());
}

absl::StatusOr<ModelBundle> Deserialize(std::string_view bytes) {
  using namespace model_file;
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    return absl::InvalidArgumentError("not a model file: bad magic");
  }
  Reader header(bytes.substr(kMagic.size()), kMagic.size());
  uint32_t version;
  SUBPIECE_RETURN_IF_ERROR(header.U32(&version));
  if (version == 0) {
    return absl::DataLossError("model file declares format version 0");
  }
  if (version > kFormatVersion) {
    return absl::UnimplementedError(fmt::format(
        "model format version {} is newer than the supported version {}",
        version, kFormatVersion));
  }

  ModelBundle bundle;
  bundle.normalizer.rule_name.clear();
  bool seen[kTrainerParams + 1] = {};
  const size_t body = kMagic.size() + 4;
  Reader records(bytes.substr(body), body);
  while (!records.done()) {
    uint16_t tag;
    uint64_t length;
    SUBPIECE_RETURN_IF_ERROR(records.U16(&tag));
    SUBPIECE_RETURN_IF_ERROR(records.U64(&length));
    const size_t payload_offset = records.offset();
    std::string_view payload;
    SUBPIECE_RETURN_IF_ERROR(records.Bytes(length, &payload));
    if (tag == 0 || tag > kTrainerParams) continue;
    if (seen[tag]) {
      return absl::DataLossError(fmt::format(
          "section {} appears twice (byte offset {})", tag, payload_offset));
    }
    seen[tag] = true;
    Reader section(payload, payload_offset);
    SUBPIECE_RETURN_IF_ERROR(ReadSection(tag, &section, &bundle));
  }
  for (Tag required : {kNormalizerSpec, kCharsMap, kModelType, kPieces,
                       kMerges, kSpecials, kTrainerParams}) {
    if (!seen[required]) {
      return absl::DataLossError(
          fmt::format("model file is missing section {}", required));
    }
  }
  return bundle;
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        fmt::format("cannot open \"{}\" for writing", path));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    return absl::DataLossError(fmt::format("failed writing \"{}\"", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(fmt::format("cannot open \"{}\"", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace subpiece
