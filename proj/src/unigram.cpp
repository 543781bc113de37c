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

#include "tokparity/unigram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tokparity/error.hpp"
#include "tokparity/unicode.hpp"

namespace tokparity {

namespace {

std::string replace_all(std::string s, std::string_view from,
                        std::string_view to) {
  if (from.empty()) return s;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

// Length of the character at `pos`; invalid bytes count as length 1.
std::size_t char_length(std::string_view s, std::size_t pos) {
  const std::size_t len =
      unicode::sequence_length(static_cast<unsigned char>(s[pos]));
  if (len > 1 && pos + len <= s.size() &&
      unicode::is_valid_utf8(s.substr(pos, len))) {
    return len;
  }
  return 1;
}

constexpr const char* kUnkSurface = "\xE2\x81\x87";  // U+2047

}  // namespace

UnigramModel::UnigramModel(std::vector<UnigramPiece> pieces,
                           UnigramOptions options)
    : pieces_(std::move(pieces)), options_(std::move(options)) {
  if (pieces_.empty()) throw ValidationError("unigram model has no pieces");
  std::set<std::string_view> seen;
  double lowest = 0.0;
  for (const UnigramPiece& p : pieces_) {
    if (p.piece.empty()) throw ValidationError("empty unigram piece");
    if (!unicode::is_valid_utf8(p.piece)) {
      throw ValidationError("unigram piece is not valid UTF-8");
    }
    if (!std::isfinite(p.log_prob) || p.log_prob > 0.0) {
      throw ValidationError("piece '" + p.piece +
                            "' has a log-prob that is not finite and <= 0");
    }
    if (!seen.insert(p.piece).second) {
      throw ValidationError("duplicate unigram piece '" + p.piece + "'");
    }
    lowest = std::min(lowest, p.log_prob);
  }
  unk_penalty_ = options_.unk_penalty.value_or(lowest - 10.0);
  if (!std::isfinite(unk_penalty_)) {
    throw ValidationError("unk penalty must be finite");
  }

  surfaces_.reserve(pieces_.size());
  std::map<std::string, std::int32_t> by_surface;
  for (std::size_t id = 0; id < pieces_.size(); ++id) {
    std::string surface = replace_all(pieces_[id].piece, options_.space_symbol, " ");
    if (!by_surface.emplace(surface, static_cast<std::int32_t>(id)).second) {
      throw ValidationError("piece '" + pieces_[id].piece +
                            "' collides with another after space mapping");
    }
    surfaces_.push_back(std::move(surface));
  }

  // std::map iteration is sorted, so children come out sorted too.
  trie_.emplace_back();
  for (const auto& [surface, id] : by_surface) {
    std::int32_t node = 0;
    for (unsigned char b : surface) {
      std::int32_t next = child(node, b);
      if (next < 0) {
        next = static_cast<std::int32_t>(trie_.size());
        trie_[node].children.emplace_back(b, next);
        trie_.emplace_back();
      }
      node = next;
    }
    trie_[node].piece = id;
  }
  for (Node& n : trie_) std::sort(n.children.begin(), n.children.end());
}

std::int32_t UnigramModel::child(std::int32_t node, unsigned char b) const {
  const auto& kids = trie_[node].children;
  const auto it = std::lower_bound(
      kids.begin(), kids.end(), b,
      [](const auto& entry, unsigned char key) { return entry.first < key; });
  if (it == kids.end() || it->first != b) return -1;
  return it->second;
}

TokenId UnigramModel::byte_token(unsigned char b) const {
  return static_cast<TokenId>(pieces_.size()) + b;
}

TokenId UnigramModel::unk_token() const {
  return static_cast<TokenId>(pieces_.size() + (byte_fallback() ? 256 : 0));
}

std::size_t UnigramModel::vocab_size() const { return unk_token() + 1; }

UnigramModel parse_unigram_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelLoadError(std::string("unigram JSON: ") + e.what());
  }
  const nlohmann::json* table = &doc;
  UnigramOptions options;
  if (doc.is_object()) {
    if (!doc.contains("pieces")) {
      throw ModelLoadError("unigram JSON object has no \"pieces\" array");
    }
    table = &doc["pieces"];
    options.byte_fallback = doc.value("byte_fallback", false);
    options.add_dummy_prefix = doc.value("add_dummy_prefix", false);
    options.space_symbol = doc.value("space_symbol", std::string());
    if (doc.contains("unk_penalty")) {
      options.unk_penalty = doc["unk_penalty"].get<double>();
    }
  }
  if (!table->is_array()) throw ModelLoadError("pieces must be a JSON array");

  std::vector<UnigramPiece> pieces;
  pieces.reserve(table->size());
  for (std::size_t i = 0; i < table->size(); ++i) {
    const auto& entry = (*table)[i];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_number()) {
      throw ModelLoadError("piece " + std::to_string(i) +
                           " is not a [string, number] pair");
    }
    pieces.push_back({entry[0].get<std::string>(), entry[1].get<double>()});
  }
  return UnigramModel(std::move(pieces), std::move(options));
}

UnigramModel load_unigram(const std::filesystem::path& model_file) {
  std::ifstream in(model_file, std::ios::binary);
  if (!in) {
    throw ModelLoadError("cannot open unigram model " + model_file.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_unigram_json(buffer.str());
}

ScoredEncoding encode_unigram_scored(const UnigramModel& model,
                                     std::string_view text) {
  ScoredEncoding result;
  if (text.empty()) return result;

  const bool prefix = model.options().add_dummy_prefix;
  std::string work;
  if (prefix) work.push_back(' ');
  work.append(text);
  const std::size_t n = work.size();

  constexpr double kUnreached = -std::numeric_limits<double>::infinity();
  constexpr std::int64_t kFallback = -1;
  struct Cell {
    double score = kUnreached;
    std::size_t from = 0;
    std::int64_t piece = kFallback;
  };
  std::vector<Cell> best(n + 1);
  best[0].score = 0.0;

  for (std::size_t i = 0; i < n;) {
    const std::size_t clen = char_length(work, i);
    if (best[i].score != kUnreached) {
      bool single_char_piece = false;
      model.for_each_prefix(
          std::string_view(work).substr(i), [&](TokenId id, std::size_t len) {
            if (len == clen) single_char_piece = true;
            const double cand = best[i].score + model.pieces()[id].log_prob;
            if (cand > best[i + len].score) {
              best[i + len] = {cand, i, static_cast<std::int64_t>(id)};
            }
          });
      if (!single_char_piece) {
        const double cost =
            model.byte_fallback()
                ? kByteFallbackLogProb * static_cast<double>(clen)
                : model.unk_penalty();
        const double cand = best[i].score + cost;
        if (cand > best[i + clen].score) {
          best[i + clen] = {cand, i, kFallback};
        }
      }
    }
    i += clen;
  }

  std::vector<std::pair<std::size_t, std::size_t>> steps;  // (from, to)
  for (std::size_t at = n; at > 0; at = best[at].from) {
    steps.emplace_back(best[at].from, at);
  }
  std::reverse(steps.begin(), steps.end());

  const std::size_t shift = prefix ? 1 : 0;
  auto to_input = [&](std::size_t from, std::size_t to) {
    const std::size_t start = from > shift ? from - shift : 0;
    return ByteSpan{start, to - shift - start};
  };
  Encoding& enc = result.encoding;
  for (const auto& [from, to] : steps) {
    const std::int64_t piece = best[to].piece;
    if (piece != kFallback) {
      enc.push(static_cast<TokenId>(piece), to_input(from, to), false);
    } else if (model.byte_fallback()) {
      for (std::size_t b = from; b < to; ++b) {
        enc.push(model.byte_token(static_cast<unsigned char>(work[b])),
                 to_input(b, b + 1), true);
      }
    } else {
      enc.push(model.unk_token(), to_input(from, to), true);
    }
  }
  result.log_prob = best[n].score;
  return result;
}

Encoding encode_unigram(const UnigramModel& model, std::string_view text) {
  return encode_unigram_scored(model, text).encoding;
}

std::string decode(const UnigramModel& model, const std::vector<TokenId>& ids) {
  const std::size_t n_pieces = model.pieces().size();
  std::string out;
  for (TokenId id : ids) {
    if (id < n_pieces) {
      out += model.surface(id);
    } else if (model.byte_fallback() && id < n_pieces + 256) {
      out.push_back(static_cast<char>(id - n_pieces));
    } else if (id == model.unk_token()) {
      out += kUnkSurface;
    } else {
      throw DecodeError(id);
    }
  }
  if (model.options().add_dummy_prefix && !out.empty() && out.front() == ' ') {
    out.erase(0, 1);
  }
  return out;
}

}  // namespace tokparity
