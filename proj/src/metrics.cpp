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

#include "tokparity/metrics.hpp"

#include <cmath>
#include <future>

#include <fmt/format.h>

#include "tokparity/error.hpp"
#include "tokparity/unicode.hpp"

namespace tokparity {

Normalization normalization_from_string(const std::string& name) {
  if (name == "nfc") return Normalization::kNfc;
  if (name == "none") return Normalization::kNone;
  throw ValidationError("unknown normalization '" + name + "'");
}

CorpusTokenization tokenize_corpus(const ParallelCorpus& corpus,
                                   const Engine& engine,
                                   const TokenizeOptions& options) {
  struct Job {
    CellKey key;
    std::string text;
  };
  std::vector<Job> jobs;
  for (const LanguageCode& lang : corpus.languages()) {
    for (const SentenceRow& row : corpus.rows()) {
      const std::string& raw = row.texts.at(lang);
      jobs.push_back({{lang, row.id},
                      options.normalization == Normalization::kNfc
                          ? unicode::nfc(raw)
                          : raw});
    }
  }

  auto run = [&](const Job& job) {
    CellResult cell;
    cell.words = word_count(job.text);
    if (engine.is_local()) {
      Encoding enc = engine.encode(job.text);
      cell.tokens = enc.size();
      cell.fallback_tokens = enc.fallback_count();
      if (options.keep_encodings) cell.encoding = std::move(enc);
    } else {
      cell.tokens = engine.count(job.text);
    }
    return cell;
  };

  CorpusTokenization out{engine.id(), {}, {}};
  if (engine.is_local()) {
    for (const Job& job : jobs) out.cells.emplace(job.key, run(job));
    return out;
  }

  // Remote cells fan out; the counter bounds in-flight requests itself.
  std::vector<std::future<CellResult>> pending;
  pending.reserve(jobs.size());
  for (const Job& job : jobs) {
    pending.push_back(std::async(std::launch::async, run, std::cref(job)));
  }
  std::optional<RemoteError> first_error;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      out.cells.emplace(jobs[i].key, pending[i].get());
    } catch (const RemoteError& e) {
      if (!first_error) first_error = e;
      out.failures.emplace(jobs[i].key, e.what());
    }
  }
  if (first_error && !options.allow_partial) throw *first_error;
  return out;
}

std::vector<FertilityStats> aggregate(const CorpusTokenization& results,
                                      const ParallelCorpus& corpus,
                                      const LanguageCode& pivot,
                                      const AggregateOptions& options) {
  if (!corpus.has_language(pivot)) {
    throw ValidationError("pivot '" + pivot.str() + "' is not a corpus language");
  }
  const bool remote = results.tokenizer.kind == TokenizerKind::kRemote;

  std::vector<FertilityStats> stats;
  for (const LanguageCode& lang : corpus.languages()) {
    FertilityStats s;
    s.tokenizer = results.tokenizer;
    s.lang = lang;
    std::vector<double> counts;
    std::size_t sum_tokens = 0;
    std::size_t sum_words = 0;
    std::size_t sum_fallback = 0;
    for (const SentenceRow& row : corpus.rows()) {
      const auto it = results.cells.find({lang, row.id});
      if (it == results.cells.end()) {
        s.incomplete = true;
        continue;
      }
      const CellResult& cell = it->second;
      counts.push_back(static_cast<double>(cell.tokens + options.overhead));
      sum_tokens += cell.tokens;
      sum_words += cell.words;
      sum_fallback += cell.fallback_tokens.value_or(0);
    }
    if (lang == pivot && s.incomplete) {
      throw ValidationError("results for pivot '" + pivot.str() +
                            "' are incomplete");
    }
    s.n_rows = counts.size();
    if (!counts.empty()) {
      double total = 0.0;
      for (double c : counts) total += c;
      s.mean_input_tokens = total / static_cast<double>(counts.size());
      double sq = 0.0;
      for (double c : counts) sq += (c - s.mean_input_tokens) * (c - s.mean_input_tokens);
      s.std_input_tokens = std::sqrt(sq / static_cast<double>(counts.size()));
    }
    s.tokens_per_word =
        sum_words == 0 ? 0.0
                       : static_cast<double>(sum_tokens) / static_cast<double>(sum_words);
    if (!remote) {
      s.byte_fallback_rate =
          sum_tokens == 0 ? 0.0
                          : static_cast<double>(sum_fallback) /
                                static_cast<double>(sum_tokens);
    }
    stats.push_back(std::move(s));
  }

  double pivot_mean = 0.0;
  for (const FertilityStats& s : stats) {
    if (s.lang == pivot) pivot_mean = s.mean_input_tokens;
  }
  if (pivot_mean == 0.0) {
    throw DegenerateError("pivot '" + pivot.str() +
                          "' has zero mean tokens; ratios are undefined");
  }
  for (FertilityStats& s : stats) {
    s.ratio_vs_pivot = s.lang == pivot ? 1.0 : s.mean_input_tokens / pivot_mean;
  }
  return stats;
}

CostModel::CostModel(double price_per_million_input_tokens)
    : price_(price_per_million_input_tokens) {
  if (!std::isfinite(price_) || price_ <= 0.0) {
    throw ValidationError("price per million input tokens must be positive");
  }
}

CostProjection cost_projection(const FertilityStats& stats,
                               const FertilityStats& pivot_stats,
                               const CostModel& cost) {
  if (stats.tokenizer != pivot_stats.tokenizer) {
    throw ValidationError("cost projection needs stats from one tokenizer");
  }
  if (pivot_stats.mean_input_tokens == 0.0) {
    throw DegenerateError("pivot mean is zero");
  }
  CostProjection p;
  p.cost_ratio = stats.lang == pivot_stats.lang
                     ? 1.0
                     : stats.mean_input_tokens / pivot_stats.mean_input_tokens;
  p.quadratic_ratio = p.cost_ratio * p.cost_ratio;
  p.cost_per_1000_queries = stats.mean_input_tokens * 1000.0 *
                            cost.price_per_million_input_tokens() / 1e6;
  return p;
}

std::string format_mean(double value) { return fmt::format("{:.1f}", value); }

std::string format_ratio(double value) {
  std::string s = fmt::format("{:.3f}", value);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

}  // namespace tokparity
