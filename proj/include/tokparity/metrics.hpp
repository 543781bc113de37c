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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tokparity/corpus.hpp"
#include "tokparity/encoding.hpp"
#include "tokparity/engine.hpp"

namespace tokparity {

enum class Normalization { kNfc, kNone };

Normalization normalization_from_string(const std::string& name);

struct CellKey {
  LanguageCode lang;
  std::int64_t row_id = 0;

  auto operator<=>(const CellKey&) const = default;
};

struct CellResult {
  std::size_t tokens = 0;
  std::size_t words = 0;
  // Absent for remote engines, which report counts only.
  std::optional<std::size_t> fallback_tokens;
  std::optional<Encoding> encoding;
};

struct CorpusTokenization {
  TokenizerId tokenizer;
  std::map<CellKey, CellResult> cells;
  std::map<CellKey, std::string> failures;
};

struct TokenizeOptions {
  Normalization normalization = Normalization::kNfc;
  // Record failing cells instead of aborting on the first failure.
  bool allow_partial = false;
  bool keep_encodings = true;
};

CorpusTokenization tokenize_corpus(const ParallelCorpus& corpus,
                                   const Engine& engine,
                                   const TokenizeOptions& options = {});

struct FertilityStats {
  TokenizerId tokenizer;
  LanguageCode lang{"und"};
  std::size_t n_rows = 0;
  double mean_input_tokens = 0.0;
  // Population standard deviation across rows.
  double std_input_tokens = 0.0;
  // Micro-average: sum of tokens over sum of words (overhead excluded).
  double tokens_per_word = 0.0;
  double ratio_vs_pivot = 0.0;
  // Absent when the engine cannot attribute fallback (remote).
  std::optional<double> byte_fallback_rate;
  bool incomplete = false;

  bool operator==(const FertilityStats&) const = default;
};

struct AggregateOptions {
  // Constant per-request tokens added to every row's count.
  std::size_t overhead = 0;
};

std::vector<FertilityStats> aggregate(const CorpusTokenization& results,
                                      const ParallelCorpus& corpus,
                                      const LanguageCode& pivot,
                                      const AggregateOptions& options = {});

class CostModel {
 public:
  explicit CostModel(double price_per_million_input_tokens);
  double price_per_million_input_tokens() const { return price_; }

 private:
  double price_;
};

struct CostProjection {
  // Per-query inference cost relative to the pivot (linear in tokens).
  double cost_ratio = 0.0;
  // Training-cost analogue under quadratic attention: cost_ratio squared.
  double quadratic_ratio = 0.0;
  double cost_per_1000_queries = 0.0;
};

CostProjection cost_projection(const FertilityStats& stats,
                               const FertilityStats& pivot_stats,
                               const CostModel& cost);

// Display rounding: one decimal for means; up to three decimals for ratios
// with trailing zeros trimmed (keeping at least one).
std::string format_mean(double value);
std::string format_ratio(double value);

}  // namespace tokparity
