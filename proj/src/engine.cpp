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

#include "tokparity/engine.hpp"

#include <filesystem>

#include "tokparity/error.hpp"

namespace tokparity {

EngineSpec parse_engine_spec(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ValidationError("engine spec '" + std::string(text) +
                          "' is not kind:target");
  }
  const std::string kind(text.substr(0, colon));
  std::string target(text.substr(colon + 1));
  EngineSpec spec;

  auto split_id = [&](const std::string& id) {
    const std::size_t slash = id.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == id.size()) {
      throw ValidationError("'" + id + "' is not provider/model");
    }
    spec.provider = id.substr(0, slash);
    spec.model = id.substr(slash + 1);
  };

  if (kind == "remote") {
    spec.kind = TokenizerKind::kRemote;
    split_id(target);
    return spec;
  }
  if (kind == "bpe") {
    spec.kind = TokenizerKind::kBpeByte;
  } else if (kind == "unigram") {
    spec.kind = TokenizerKind::kUnigram;
  } else {
    throw ValidationError("unknown engine kind '" + kind + "'");
  }
  const std::size_t at = target.rfind('@');
  if (at != std::string::npos) {
    split_id(target.substr(at + 1));
    target.resize(at);
  } else {
    spec.provider = "local";
    spec.model = std::filesystem::path(target).stem().string();
  }
  if (target.empty()) throw ValidationError("engine spec has an empty path");
  spec.path = target;
  return spec;
}

std::optional<std::string> openai_encoding_for(std::string_view model) {
  auto starts = [&](std::string_view prefix) {
    return model.substr(0, prefix.size()) == prefix;
  };
  if (starts("gpt-4.1") || starts("gpt-4o") || starts("o1") || starts("o3") ||
      starts("o4") || starts("gpt-4.5")) {
    return "o200k_base";
  }
  if (starts("gpt-4") || starts("gpt-3.5")) return "cl100k_base";
  return std::nullopt;
}

Engine::Engine(TokenizerId id, Impl impl)
    : id_(std::move(id)), impl_(std::move(impl)) {}

Encoding Engine::encode(std::string_view text) const {
  if (const auto* bpe = std::get_if<std::shared_ptr<const BpeModel>>(&impl_)) {
    return encode_bpe(**bpe, text);
  }
  if (const auto* uni =
          std::get_if<std::shared_ptr<const UnigramModel>>(&impl_)) {
    return encode_unigram(**uni, text);
  }
  throw ValidationError("remote engine " + id_.provider + "/" + id_.model +
                        " yields counts, not encodings");
}

std::size_t Engine::count(std::string_view text) const {
  if (const auto* remote = std::get_if<std::shared_ptr<RemoteCounter>>(&impl_)) {
    return (*remote)->count(text);
  }
  return encode(text).size();
}

Engine load_engine(const EngineSpec& spec, const EngineOptions& options) {
  TokenizerId id(spec.provider, spec.model, spec.kind);
  switch (spec.kind) {
    case TokenizerKind::kBpeByte:
      return Engine(id, std::make_shared<const BpeModel>(
                            load_bpe(spec.path, options.pretokenizer)));
    case TokenizerKind::kUnigram:
      return Engine(id, std::make_shared<const UnigramModel>(
                            load_unigram(spec.path)));
    case TokenizerKind::kRemote:
      return Engine(id, std::make_shared<RemoteCounter>(
                            id, credential_from_env(spec.provider),
                            options.remote, options.cassette));
  }
  throw ValidationError("unsupported engine kind");
}

}  // namespace tokparity
