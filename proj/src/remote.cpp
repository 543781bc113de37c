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

#include "tokparity/remote.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tokparity/error.hpp"

namespace tokparity {

const char* to_string(RemoteError::Kind kind) {
  switch (kind) {
    case RemoteError::Kind::kAuth:
      return "Auth";
    case RemoteError::Kind::kRateLimit:
      return "RateLimit";
    case RemoteError::Kind::kNetwork:
      return "Network";
    case RemoteError::Kind::kProtocol:
      return "Protocol";
    case RemoteError::Kind::kUnsupported:
      return "Unsupported";
  }
  return "?";
}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (c == '-') c = '_';
  }
  return out;
}

std::optional<std::string> env(const std::string& name) {
  const char* value = std::getenv(name.c_str());
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

std::string default_base_url(std::string_view provider) {
  if (auto url = env("TOKPARITY_" + upper(provider) + "_BASE_URL")) return *url;
  if (provider == "anthropic") return "https://api.anthropic.com";
  throw RemoteError(RemoteError::Kind::kUnsupported,
                    "no token-counting endpoint known for provider '" +
                        std::string(provider) + "'");
}

}  // namespace

Cassette::Cassette(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cassette " + path_.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("cassette " + path_.string() + " is not a JSON object");
  }
  for (const auto& [k, v] : doc.items()) {
    if (!v.is_number_unsigned()) {
      throw ValidationError("cassette entry " + k + " is not a count");
    }
    entries_[k] = v.get<std::size_t>();
  }
}

std::string Cassette::key(std::string_view provider, std::string_view model,
                          std::string_view text) {
  std::string material;
  material.reserve(provider.size() + model.size() + text.size() + 2);
  material.append(provider).push_back('\0');
  material.append(model).push_back('\0');
  material.append(text);
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(material.data()),
         material.size(), digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned char b : digest) {
    hex.push_back(kHex[b >> 4]);
    hex.push_back(kHex[b & 0xF]);
  }
  return hex;
}

std::optional<std::size_t> Cassette::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Cassette::record(const std::string& key, std::size_t count) {
  std::lock_guard lock(mutex_);
  entries_[key] = count;
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::string Cassette::to_json() const {
  std::lock_guard lock(mutex_);
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [k, v] : entries_) doc[k] = v;
  return doc.dump(2) + "\n";
}

void Cassette::save() const {
  if (path_.empty()) return;
  const std::string text = to_json();
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write cassette " + path_.string());
  out << text;
}

std::optional<std::string> credential_from_env(std::string_view provider) {
  return env("TOKPARITY_" + upper(provider) + "_KEY");
}

RemoteCounter::RemoteCounter(TokenizerId id,
                             std::optional<std::string> credential,
                             RemoteConfig config,
                             std::shared_ptr<Cassette> cassette)
    : id_(std::move(id)),
      credential_(std::move(credential)),
      config_(std::move(config)),
      cassette_(std::move(cassette)),
      in_flight_(std::make_unique<std::counting_semaphore<>>(
          std::max<std::ptrdiff_t>(1, config_.max_in_flight))) {}

std::size_t RemoteCounter::count(std::string_view text) {
  const std::string key = Cassette::key(id_.provider, id_.model, text);
  if (cassette_) {
    if (auto cached = cassette_->lookup(key)) return *cached;
  }
  const std::size_t n = request(text);
  if (cassette_) cassette_->record(key, n);
  return n;
}

std::size_t RemoteCounter::request(std::string_view text) {
  if (id_.provider != "anthropic") {
    throw RemoteError(RemoteError::Kind::kUnsupported,
                      "remote counting is not implemented for provider '" +
                          id_.provider + "'");
  }
  if (!credential_) {
    throw RemoteError(RemoteError::Kind::kAuth,
                      "no credential: set TOKPARITY_" + upper(id_.provider) +
                          "_KEY");
  }
  const std::string base =
      config_.base_url.empty() ? default_base_url(id_.provider) : config_.base_url;

  nlohmann::json body;
  body["model"] = id_.model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "user"}, {"content", std::string(text)}}});
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"x-api-key", *credential_},
                                    {"anthropic-version", "2023-06-01"}};

  in_flight_->acquire();
  struct Release {
    std::counting_semaphore<>* s;
    ~Release() { s->release(); }
  } release{in_flight_.get()};

  httplib::Client client(base);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);

  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    const bool last = attempt >= config_.max_retries;
    auto res = client.Post("/v1/messages/count_tokens", headers, payload,
                           "application/json");
    if (!res) {
      if (last) {
        throw RemoteError(RemoteError::Kind::kNetwork,
                          "request to " + base + " failed: " +
                              httplib::to_string(res.error()));
      }
    } else if (res->status == 200) {
      try {
        const auto reply = nlohmann::json::parse(res->body);
        return reply.at("input_tokens").get<std::size_t>();
      } catch (const nlohmann::json::exception& e) {
        throw RemoteError(RemoteError::Kind::kProtocol,
                          std::string("unexpected count reply: ") + e.what());
      }
    } else if (res->status == 401 || res->status == 403) {
      throw RemoteError(RemoteError::Kind::kAuth,
                        "provider rejected the credential (HTTP " +
                            std::to_string(res->status) + ")");
    } else if (res->status == 429) {
      if (last) {
        throw RemoteError(RemoteError::Kind::kRateLimit,
                          "rate limited after " + std::to_string(attempt + 1) +
                              " attempts");
      }
    } else if (res->status >= 500) {
      if (last) {
        throw RemoteError(RemoteError::Kind::kNetwork,
                          "provider error HTTP " + std::to_string(res->status));
      }
    } else {
      throw RemoteError(RemoteError::Kind::kProtocol,
                        "HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

std::size_t count_tokens_remote(const TokenizerId& id, std::string_view text,
                                const std::optional<std::string>& credential,
                                const RemoteConfig& config,
                                std::shared_ptr<Cassette> cassette) {
  if (id.kind != TokenizerKind::kRemote) {
    throw ValidationError("tokenizer " + id.provider + "/" + id.model +
                          " is not a remote engine");
  }
  RemoteCounter counter(id, credential, config, std::move(cassette));
  return counter.count(text);
}

}  // namespace tokparity
