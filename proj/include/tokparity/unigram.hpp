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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tokparity/encoding.hpp"

namespace tokparity {

inline constexpr double kByteFallbackLogProb = -20.0;

struct UnigramPiece {
  std::string piece;
  double log_prob = 0.0;

  bool operator==(const UnigramPiece&) const = default;
};

struct UnigramOptions {
  bool byte_fallback = false;
  // Score of the per-character unknown token when byte_fallback is off.
  // Defaults to (lowest piece log-prob - 10).
  std::optional<double> unk_penalty;
  // Sentencepiece whitespace convention: a virtual space is prepended to
  // non-empty input, and `space_symbol` inside pieces matches U+0020.
  bool add_dummy_prefix = false;
  std::string space_symbol;
};

// Unigram-LM segmentation model. Token ids: pieces 0..P-1 in table order,
// then (with byte_fallback) the 256 byte tokens P..P+255, then unk.
class UnigramModel {
 public:
  UnigramModel(std::vector<UnigramPiece> pieces, UnigramOptions options = {});

  const std::vector<UnigramPiece>& pieces() const { return pieces_; }
  const UnigramOptions& options() const { return options_; }
  bool byte_fallback() const { return options_.byte_fallback; }
  double unk_penalty() const { return unk_penalty_; }

  TokenId byte_token(unsigned char b) const;
  TokenId unk_token() const;
  std::size_t vocab_size() const;

  // Surface bytes of a piece, with the space symbol mapped to U+0020.
  const std::string& surface(TokenId piece) const { return surfaces_[piece]; }

  // Longest-prefix walk: calls `visit(piece_id, byte_length)` for every piece
  // that is a prefix of `text`.
  template <typename Visit>
  void for_each_prefix(std::string_view text, Visit&& visit) const;

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::int32_t>> children;  // sorted
    std::int32_t piece = -1;
  };
  std::int32_t child(std::int32_t node, unsigned char b) const;

  std::vector<UnigramPiece> pieces_;
  std::vector<std::string> surfaces_;
  UnigramOptions options_;
  double unk_penalty_ = 0.0;
  std::vector<Node> trie_;
};

template <typename Visit>
void UnigramModel::for_each_prefix(std::string_view text, Visit&& visit) const {
  std::int32_t node = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    node = child(node, static_cast<unsigned char>(text[i]));
    if (node < 0) return;
    if (trie_[node].piece >= 0) visit(static_cast<TokenId>(trie_[node].piece), i + 1);
  }
}

// Accepts either `[[piece, log_prob], ...]` or
// `{"pieces": [...], "byte_fallback": bool, ...flags}`.
UnigramModel parse_unigram_json(std::string_view json_text);
UnigramModel load_unigram(const std::filesystem::path& model_file);

struct ScoredEncoding {
  Encoding encoding;
  double log_prob = 0.0;
};

// Viterbi maximum-log-probability segmentation.
ScoredEncoding encode_unigram_scored(const UnigramModel& model,
                                     std::string_view text);
Encoding encode_unigram(const UnigramModel& model, std::string_view text);

std::string decode(const UnigramModel& model, const std::vector<TokenId>& ids);

}  // namespace tokparity
