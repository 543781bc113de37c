// Copyright 2026 The tokparity Authors
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

#include "tokparity/bpe.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "tokparity/error.hpp"

namespace tokparity {

namespace {

constexpr TokenId kNoRank = std::numeric_limits<TokenId>::max();

std::optional<std::string> base64_decode(std::string_view text) {
  if (text.empty() || text.size() % 4 != 0) return std::nullopt;
  std::string out(text.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(
      reinterpret_cast<unsigned char*>(out.data()),
      reinterpret_cast<const unsigned char*>(text.data()),
      static_cast<int>(text.size()));
  if (n < 0) return std::nullopt;
  std::size_t padding = 0;
  if (text.back() == '=') ++padding;
  if (text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(
      reinterpret_cast<unsigned char*>(out.data()),
      reinterpret_cast<const unsigned char*>(bytes.data()),
      static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace

std::size_t Encoding::fallback_count() const {
  return static_cast<std::size_t>(
      std::count(fallback_flags.begin(), fallback_flags.end(), true));
}

const char* to_string(TokenizerKind kind) {
  switch (kind) {
    case TokenizerKind::kBpeByte:
      return "bpe_byte";
    case TokenizerKind::kUnigram:
      return "unigram";
    case TokenizerKind::kRemote:
      return "remote";
  }
  return "?";
}

TokenizerKind tokenizer_kind_from_string(const std::string& name) {
  if (name == "bpe_byte" || name == "bpe") return TokenizerKind::kBpeByte;
  if (name == "unigram") return TokenizerKind::kUnigram;
  if (name == "remote") return TokenizerKind::kRemote;
  throw ValidationError("unknown tokenizer kind '" + name + "'");
}

TokenizerId::TokenizerId(std::string provider_, std::string model_,
                         TokenizerKind kind_)
    : provider(std::move(provider_)), model(std::move(model_)), kind(kind_) {
  if (provider.empty() || model.empty()) {
    throw ValidationError("tokenizer provider and model must be non-empty");
  }
}

BpeModel::BpeModel(std::vector<std::pair<std::string, TokenId>> ranked_tokens,
                   PretokenSpec pretokenizer,
                   std::map<std::string, TokenId> specials)
    : specials_(std::move(specials)), pretokenizer_(pretokenizer) {
  encoder_.reserve(ranked_tokens.size());
  decoder_.reserve(ranked_tokens.size());
  for (auto& [bytes, rank] : ranked_tokens) {
    if (bytes.empty()) throw ValidationError("empty token in vocabulary");
    if (rank == kNoRank) throw ValidationError("rank out of range");
    if (!decoder_.emplace(rank, bytes).second) {
      throw ValidationError("duplicate rank " + std::to_string(rank));
    }
    if (!encoder_.emplace(std::move(bytes), rank).second) {
      throw ValidationError("duplicate token bytes at rank " +
                            std::to_string(rank));
    }
  }
  for (int b = 0; b < 256; ++b) {
    const auto it = encoder_.find(std::string(1, static_cast<char>(b)));
    if (it == encoder_.end()) {
      char hex[8];
      std::snprintf(hex, sizeof hex, "0x%02X", b);
      throw ValidationError(std::string("vocabulary is missing byte ") + hex);
    }
    byte_tokens_[b] = it->second;
  }
  for (const auto& [text, id] : specials_) {
    if (decoder_.count(id) || !special_decoder_.emplace(id, text).second) {
      throw ValidationError("special token id " + std::to_string(id) +
                            " collides with another token");
    }
  }
}

BpeModel BpeModel::byte_identity(PretokenSpec pretokenizer) {
  std::vector<std::pair<std::string, TokenId>> tokens;
  for (int b = 0; b < 256; ++b) {
    tokens.emplace_back(std::string(1, static_cast<char>(b)),
                        static_cast<TokenId>(b));
  }
  return BpeModel(std::move(tokens), pretokenizer);
}

std::optional<TokenId> BpeModel::find(std::string_view bytes) const {
  const auto it = encoder_.find(std::string(bytes));
  if (it == encoder_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> BpeModel::merge_rank(std::string_view left,
                                            std::string_view right) const {
  if (!find(left) || !find(right)) return std::nullopt;
  std::string joined(left);
  joined += right;
  return find(joined);
}

const std::string* BpeModel::token_bytes(TokenId id) const {
  if (const auto it = decoder_.find(id); it != decoder_.end()) {
    return &it->second;
  }
  if (const auto it = special_decoder_.find(id); it != special_decoder_.end()) {
    return &it->second;
  }
  return nullptr;
}

std::vector<std::pair<std::string, TokenId>> BpeModel::ranked_tokens() const {
  std::vector<std::pair<std::string, TokenId>> out(encoder_.begin(),
                                                   encoder_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

BpeModel parse_rank_vocabulary(std::string_view contents,
                               PretokenSpec pretokenizer) {
  std::vector<std::pair<std::string, TokenId>> tokens;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos || space == 0) {
      throw ModelLoadError(line_no, "expected '<base64> <rank>'");
    }
    auto bytes = base64_decode(line.substr(0, space));
    if (!bytes || bytes->empty()) {
      throw ModelLoadError(line_no, "malformed base64 token");
    }
    const std::string_view rank_text = line.substr(space + 1);
    TokenId rank = 0;
    const auto [ptr, ec] = std::from_chars(
        rank_text.data(), rank_text.data() + rank_text.size(), rank);
    if (ec != std::errc() || ptr != rank_text.data() + rank_text.size() ||
        rank == kNoRank) {
      throw ModelLoadError(line_no, "rank '" + std::string(rank_text) +
                                        "' is not a non-negative integer");
    }
    tokens.emplace_back(std::move(*bytes), rank);
  }
  return BpeModel(std::move(tokens), pretokenizer);
}

BpeModel load_bpe(const std::filesystem::path& rank_file,
                  PretokenSpec pretokenizer) {
  std::ifstream in(rank_file, std::ios::binary);
  if (!in) throw ModelLoadError("cannot open rank file " + rank_file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_rank_vocabulary(buffer.str(), pretokenizer);
}

std::string serialize_rank_vocabulary(const BpeModel& model) {
  std::string out;
  for (const auto& [bytes, rank] : model.ranked_tokens()) {
    out += base64_encode(bytes);
    out += ' ';
    out += std::to_string(rank);
    out += '\n';
  }
  return out;
}

std::vector<TokenId> merge_chunk(const BpeModel& model,
                                 std::string_view chunk) {
  std::vector<TokenId> ids;
  if (chunk.empty()) return ids;
  if (const auto whole = model.find(chunk)) {
    ids.push_back(*whole);
    return ids;
  }
  if (chunk.size() == 1) {
    ids.push_back(model.byte_token(static_cast<unsigned char>(chunk[0])));
    return ids;
  }

  // parts[i] = (start offset of part i, rank of merging part i with i+1).
  // Always merges the lowest rank, leftmost on ties.
  auto rank_of = [&](std::size_t from, std::size_t to) {
    return model.find(chunk.substr(from, to - from)).value_or(kNoRank);
  };
  std::vector<std::pair<std::size_t, TokenId>> parts;
  parts.reserve(chunk.size() + 1);
  for (std::size_t i = 0; i + 1 < chunk.size(); ++i) {
    parts.emplace_back(i, rank_of(i, i + 2));
  }
  parts.emplace_back(chunk.size() - 1, kNoRank);
  parts.emplace_back(chunk.size(), kNoRank);

  auto rank_after_merge = [&](std::size_t i) {
    return i + 3 < parts.size() ? rank_of(parts[i].first, parts[i + 3].first)
                                : kNoRank;
  };
  while (true) {
    TokenId best = kNoRank;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (parts[i].second < best) {
        best = parts[i].second;
        at = i;
      }
    }
    if (best == kNoRank) break;
    if (at > 0) parts[at - 1].second = rank_after_merge(at - 1);
    parts[at].second = rank_after_merge(at);
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(at) + 1);
  }

  ids.reserve(parts.size() - 1);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto id = model.find(
        chunk.substr(parts[i].first, parts[i + 1].first - parts[i].first));
    ids.push_back(*id);
  }
  return ids;
}

Encoding encode_bpe(const BpeModel& model, std::string_view text) {
  Encoding out;
  for (const ByteSpan& chunk : pretokenize(text, model.pretokenizer())) {
    std::size_t offset = chunk.offset;
    for (TokenId id : merge_chunk(model, text.substr(chunk.offset, chunk.length))) {
      const std::size_t len = model.token_bytes(id)->size();
      // A lone byte >= 0x80 is a fragment of a multi-byte character.
      const bool fallback =
          len == 1 && static_cast<unsigned char>(text[offset]) >= 0x80;
      out.push(id, {offset, len}, fallback);
      offset += len;
    }
  }
  return out;
}

std::string decode(const BpeModel& model, const std::vector<TokenId>& ids) {
  std::string out;
  for (TokenId id : ids) {
    const std::string* bytes = model.token_bytes(id);
    if (bytes == nullptr) throw DecodeError(id);
    out += *bytes;
  }
  return out;
}

}  // namespace tokparity
