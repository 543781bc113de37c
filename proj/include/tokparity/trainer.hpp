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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tokparity/bpe.hpp"
#include "tokparity/corpus.hpp"

namespace tokparity {

struct TrainOptions {
  PretokenSpec pretokenizer;
  bool nfc = true;
};

struct WeightedText {
  std::string text;
  std::size_t repeats = 1;
};

// Byte-level BPE training. The most frequent adjacent pair is merged each
// step; equal counts go to the lexicographically smaller (left, right) byte
// pair. Stops at `vocab_size` entries or when no pair is left.
BpeModel train_bpe_on_texts(std::span<const WeightedText> texts,
                            std::size_t vocab_size,
                            const TrainOptions& options = {});

// Integer repeat factor per language: round(weight / min weight).
std::map<LanguageCode, std::size_t> repeat_factors(
    const ParallelCorpus& corpus,
    const std::map<LanguageCode, double>& language_weights);

// Parity-aware training: each language's text stream is repeated in
// proportion to its weight. Weights must cover every corpus language.
BpeModel train_bpe(const ParallelCorpus& corpus, std::size_t vocab_size,
                   const std::map<LanguageCode, double>& language_weights,
                   const TrainOptions& options = {});

}  // namespace tokparity
