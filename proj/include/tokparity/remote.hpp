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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>

#include "tokparity/encoding.hpp"

namespace tokparity {

// Replay store for provider token counts: a JSON object mapping the SHA-256
// hex digest of (provider, model, text) to an integer count.
class Cassette {
 public:
  Cassette() = default;
  explicit Cassette(std::filesystem::path path);

  static std::string key(std::string_view provider, std::string_view model,
                         std::string_view text);

  std::optional<std::size_t> lookup(const std::string& key) const;
  void record(const std::string& key, std::size_t count);
  std::size_t size() const;

  // Writes to the path given at construction; no-op without one.
  void save() const;
  std::string to_json() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::string, std::size_t> entries_;
};

struct RemoteConfig {
  // Empty selects the provider's public endpoint, or the
  // TOKPARITY_<PROVIDER>_BASE_URL environment override.
  std::string base_url;
  std::ptrdiff_t max_in_flight = 4;
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{30};
};

// TOKPARITY_<PROVIDER>_KEY, provider upper-cased.
std::optional<std::string> credential_from_env(std::string_view provider);

// Provider token-counting endpoint client. Cached counts are served from the
// cassette; fresh counts are recorded into it. Failures always throw
// RemoteError and never produce a count.
class RemoteCounter {
 public:
  RemoteCounter(TokenizerId id, std::optional<std::string> credential,
                RemoteConfig config = {}, std::shared_ptr<Cassette> cassette = {});

  const TokenizerId& id() const { return id_; }
  std::size_t count(std::string_view text);

 private:
  std::size_t request(std::string_view text);

  TokenizerId id_;
  std::optional<std::string> credential_;
  RemoteConfig config_;
  std::shared_ptr<Cassette> cassette_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

std::size_t count_tokens_remote(const TokenizerId& id, std::string_view text,
                                const std::optional<std::string>& credential,
                                const RemoteConfig& config = {},
                                std::shared_ptr<Cassette> cassette = {});

}  // namespace tokparity
