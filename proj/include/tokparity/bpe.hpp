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

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokparity/encoding.hpp"

namespace tokparity {

// How text is cut into chunks before byte-pair merging. Merges never cross
// chunk boundaries.
//   kNone             whole text is one chunk
//   kWhitespace       whitespace runs attach to the following word
//   kUnicodeCategory  letter / number / punctuation / whitespace runs with
//                     the same split rules as the o200k_base encoding
enum class PretokenMode { kNone, kWhitespace, kUnicodeCategory };

struct PretokenSpec {
  PretokenMode mode = PretokenMode::kUnicodeCategory;
};

const char* to_string(PretokenMode mode);
PretokenMode pretoken_mode_from_string(std::string_view name);

// Byte spans of the chunks of `text`, in order, tiling the input.
std::vector<ByteSpan> pretokenize(std::string_view text, PretokenSpec spec);

// Byte-level rank-merge BPE model. Token ids are ranks; a pair of adjacent
// tokens merges with the rank of its concatenation when that exists.
class BpeModel {
 public:
  BpeModel(std::vector<std::pair<std::string, TokenId>> ranked_tokens,
           PretokenSpec pretokenizer,
           std::map<std::string, TokenId> specials = {});

  // 256-entry model with byte b at rank b: encodes every input to raw bytes.
  static BpeModel byte_identity(PretokenSpec pretokenizer = {});

  std::size_t vocab_size() const { return encoder_.size(); }
  const PretokenSpec& pretokenizer() const { return pretokenizer_; }
  const std::map<std::string, TokenId>& specials() const { return specials_; }

  std::optional<TokenId> find(std::string_view bytes) const;
  TokenId byte_token(unsigned char b) const { return byte_tokens_[b]; }
  // Rank at which `left` + `right` merge, if both are tokens and the
  // concatenation is in the vocabulary.
  std::optional<TokenId> merge_rank(std::string_view left,
                                    std::string_view right) const;
  // Bytes of a token id (specials included); nullptr when unknown.
  const std::string* token_bytes(TokenId id) const;

  // Entries sorted by rank.
  std::vector<std::pair<std::string, TokenId>> ranked_tokens() const;

 private:
  std::unordered_map<std::string, TokenId> encoder_;
  std::unordered_map<TokenId, std::string> decoder_;
  std::map<std::string, TokenId> specials_;
  std::unordered_map<TokenId, std::string> special_decoder_;
  std::array<TokenId, 256> byte_tokens_{};
  PretokenSpec pretokenizer_;
};

// Rank vocabulary format: `base64(token bytes) SP rank` per line.
BpeModel parse_rank_vocabulary(std::string_view contents,
                               PretokenSpec pretokenizer = {});
BpeModel load_bpe(const std::filesystem::path& rank_file,
                  PretokenSpec pretokenizer = {});
std::string serialize_rank_vocabulary(const BpeModel& model);

Encoding encode_bpe(const BpeModel& model, std::string_view text);

// Merges one chunk to a fixed point. Exposed for property tests.
std::vector<TokenId> merge_chunk(const BpeModel& model, std::string_view chunk);

std::string decode(const BpeModel& model, const std::vector<TokenId>& ids);

}  // namespace tokparity
