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

#include "tokparity/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "tokparity/error.hpp"
#include "tokparity/unicode.hpp"

namespace tokparity {

namespace {

struct Word {
  std::vector<TokenId> symbols;
  std::size_t count = 0;
};

struct PairHash {
  std::size_t operator()(const std::pair<TokenId, TokenId>& p) const {
    return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
  }
};

}  // namespace

BpeModel train_bpe_on_texts(std::span<const WeightedText> texts,
                            std::size_t vocab_size,
                            const TrainOptions& options) {
  if (vocab_size < 256) {
    throw ValidationError("vocab_size " + std::to_string(vocab_size) +
                          " is below the 256 byte tokens");
  }

  std::map<std::string, std::size_t> chunk_counts;
  for (const WeightedText& wt : texts) {
    const std::string text = options.nfc ? unicode::nfc(wt.text) : wt.text;
    for (const ByteSpan& span : pretokenize(text, options.pretokenizer)) {
      chunk_counts[text.substr(span.offset, span.length)] += wt.repeats;
    }
  }

  std::vector<std::string> vocab;
  std::unordered_map<std::string, TokenId> index;
  for (int b = 0; b < 256; ++b) {
    vocab.emplace_back(1, static_cast<char>(b));
    index.emplace(vocab.back(), static_cast<TokenId>(b));
  }

  std::vector<Word> words;
  words.reserve(chunk_counts.size());
  for (const auto& [chunk, count] : chunk_counts) {
    Word w;
    w.count = count;
    for (unsigned char c : chunk) w.symbols.push_back(c);
    words.push_back(std::move(w));
  }

  while (vocab.size() < vocab_size) {
    std::unordered_map<std::pair<TokenId, TokenId>, std::size_t, PairHash> freq;
    for (const Word& w : words) {
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
        freq[{w.symbols[i], w.symbols[i + 1]}] += w.count;
      }
    }
    if (freq.empty()) break;

    auto better = [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      const std::string& al = vocab[a.first.first];
      const std::string& bl = vocab[b.first.first];
      if (al != bl) return al < bl;
      return vocab[a.first.second] < vocab[b.first.second];
    };
    auto best = freq.begin();
    for (auto it = std::next(freq.begin()); it != freq.end(); ++it) {
      if (better(*it, *best)) best = it;
    }
    const auto [left, right] = best->first;

    const std::string merged = vocab[left] + vocab[right];
    TokenId id = 0;
    if (const auto it = index.find(merged); it != index.end()) {
      id = it->second;
    } else {
      id = static_cast<TokenId>(vocab.size());
      vocab.push_back(merged);
      index.emplace(merged, id);
    }
    for (Word& w : words) {
      std::vector<TokenId> out;
      out.reserve(w.symbols.size());
      for (std::size_t i = 0; i < w.symbols.size(); ++i) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == left &&
            w.symbols[i + 1] == right) {
          out.push_back(id);
          ++i;
        } else {
          out.push_back(w.symbols[i]);
        }
      }
      w.symbols = std::move(out);
    }
  }

  std::vector<std::pair<std::string, TokenId>> ranked;
  ranked.reserve(vocab.size());
  for (TokenId id = 0; id < vocab.size(); ++id) ranked.emplace_back(vocab[id], id);
  return BpeModel(std::move(ranked), options.pretokenizer);
}

std::map<LanguageCode, std::size_t> repeat_factors(
    const ParallelCorpus& corpus,
    const std::map<LanguageCode, double>& language_weights) {
  for (const auto& [lang, weight] : language_weights) {
    if (!corpus.has_language(lang)) {
      throw ValidationError("weight given for '" + lang.str() +
                            "', which is not a corpus language");
    }
    if (!std::isfinite(weight) || weight <= 0.0) {
      throw ValidationError("weight for '" + lang.str() +
                            "' must be a positive real");
    }
  }
  double min_weight = std::numeric_limits<double>::infinity();
  for (const LanguageCode& lang : corpus.languages()) {
    const auto it = language_weights.find(lang);
    if (it == language_weights.end()) {
      throw ValidationError("no training weight for language '" + lang.str() +
                            "'");
    }
    min_weight = std::min(min_weight, it->second);
  }
  std::map<LanguageCode, std::size_t> repeats;
  for (const LanguageCode& lang : corpus.languages()) {
    const double ratio = language_weights.at(lang) / min_weight;
    repeats[lang] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio)));
  }
  return repeats;
}

BpeModel train_bpe(const ParallelCorpus& corpus, std::size_t vocab_size,
                   const std::map<LanguageCode, double>& language_weights,
                   const TrainOptions& options) {
  if (vocab_size < 256) {
    throw ValidationError("vocab_size " + std::to_string(vocab_size) +
                          " is below the 256 byte tokens");
  }
  const auto repeats = repeat_factors(corpus, language_weights);
  std::vector<WeightedText> texts;
  for (const LanguageCode& lang : corpus.languages()) {
    for (const SentenceRow& row : corpus.rows()) {
      texts.push_back({row.texts.at(lang), repeats.at(lang)});
    }
  }
  return train_bpe_on_texts(texts, vocab_size, options);
}

}  // namespace tokparity
