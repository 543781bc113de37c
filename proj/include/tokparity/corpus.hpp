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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tokparity {

// Short language identifier such as "en", "ar_msa" or "darija_ar".
// Lowercase ASCII letters, digits and underscore; never empty.
class LanguageCode {
 public:
  explicit LanguageCode(std::string code);

  static bool is_valid(std::string_view code);

  const std::string& str() const { return code_; }
  auto operator<=>(const LanguageCode&) const = default;

 private:
  std::string code_;
};

struct SentenceRow {
  std::int64_t id = 0;
  std::map<LanguageCode, std::string> texts;

  bool operator==(const SentenceRow&) const = default;
};

// Aligned multilingual rows. Immutable once constructed; the constructor
// enforces every structural invariant.
class ParallelCorpus {
 public:
  ParallelCorpus(std::string name, std::vector<LanguageCode> languages,
                 std::vector<SentenceRow> rows);

  const std::string& name() const { return name_; }
  const std::vector<LanguageCode>& languages() const { return languages_; }
  const std::vector<SentenceRow>& rows() const { return rows_; }

  bool has_language(const LanguageCode& lang) const;
  const std::string& text(std::size_t row_index, const LanguageCode& lang) const;

  bool operator==(const ParallelCorpus&) const = default;

 private:
  std::string name_;
  std::vector<LanguageCode> languages_;
  std::vector<SentenceRow> rows_;
};

struct CorpusParseOptions {
  bool header_present = true;
  // Required when header_present is false, ignored otherwise.
  std::vector<LanguageCode> languages;
  std::string name = "corpus";
};

// Parses UTF-8 TSV with an `id` first column. LF and CRLF both accepted;
// blank lines are skipped.
ParallelCorpus parse_corpus(std::string_view source,
                            const CorpusParseOptions& options = {});

ParallelCorpus load_corpus_file(const std::filesystem::path& path);

// Inverse of parse_corpus (header included, LF line endings).
std::string serialize_corpus(const ParallelCorpus& corpus);

// Number of maximal runs of non-White_Space code points.
std::size_t word_count(std::string_view text);

}  // namespace tokparity
