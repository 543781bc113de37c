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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tokparity {

using TokenId = std::uint32_t;

struct ByteSpan {
  std::size_t offset = 0;
  std::size_t length = 0;

  bool operator==(const ByteSpan&) const = default;
};

// Token ids for one text under one engine. The three vectors are parallel;
// spans tile the input bytes in order.
struct Encoding {
  std::vector<TokenId> token_ids;
  std::vector<ByteSpan> spans;
  std::vector<bool> fallback_flags;

  std::size_t size() const { return token_ids.size(); }
  std::size_t fallback_count() const;

  void push(TokenId id, ByteSpan span, bool fallback) {
    token_ids.push_back(id);
    spans.push_back(span);
    fallback_flags.push_back(fallback);
  }

  bool operator==(const Encoding&) const = default;
};

enum class TokenizerKind { kBpeByte, kUnigram, kRemote };

const char* to_string(TokenizerKind kind);
TokenizerKind tokenizer_kind_from_string(const std::string& name);

struct TokenizerId {
  std::string provider;
  std::string model;
  TokenizerKind kind = TokenizerKind::kBpeByte;

  TokenizerId() = default;
  TokenizerId(std::string provider, std::string model, TokenizerKind kind);

  auto operator<=>(const TokenizerId&) const = default;
};

}  // namespace tokparity
