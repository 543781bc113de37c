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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "tokparity/bpe.hpp"
#include "tokparity/remote.hpp"
#include "tokparity/unigram.hpp"

namespace tokparity {

// Parsed `--engine` value:
//   bpe:<rank file>[@provider/model]
//   unigram:<json file>[@provider/model]
//   remote:<provider>/<model>
struct EngineSpec {
  TokenizerKind kind = TokenizerKind::kBpeByte;
  std::string path;
  std::string provider;
  std::string model;
};

EngineSpec parse_engine_spec(std::string_view text);

// Rank-file name ("o200k_base", "cl100k_base") behind an OpenAI model id.
// Several models share one encoding, so their counts coincide.
std::optional<std::string> openai_encoding_for(std::string_view model);

// One tokenizer under audit. Local models are immutable and shared; the
// remote counter is internally synchronized.
class Engine {
 public:
  using Impl = std::variant<std::shared_ptr<const BpeModel>,
                            std::shared_ptr<const UnigramModel>,
                            std::shared_ptr<RemoteCounter>>;

  Engine(TokenizerId id, Impl impl);

  const TokenizerId& id() const { return id_; }
  bool is_local() const { return id_.kind != TokenizerKind::kRemote; }

  // Full encoding; only valid for local engines.
  Encoding encode(std::string_view text) const;
  std::size_t count(std::string_view text) const;

 private:
  TokenizerId id_;
  Impl impl_;
};

struct EngineOptions {
  PretokenSpec pretokenizer;
  RemoteConfig remote;
  std::shared_ptr<Cassette> cassette;
};

Engine load_engine(const EngineSpec& spec, const EngineOptions& options = {});

}  // namespace tokparity
