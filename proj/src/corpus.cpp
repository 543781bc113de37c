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

#include "tokparity/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "tokparity/error.hpp"
#include "tokparity/unicode.hpp"

namespace tokparity {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

LanguageCode::LanguageCode(std::string code) : code_(std::move(code)) {
  if (!is_valid(code_)) {
    throw ValidationError("invalid language code '" + code_ + "'");
  }
}

bool LanguageCode::is_valid(std::string_view code) {
  if (code.empty()) return false;
  return std::all_of(code.begin(), code.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

ParallelCorpus::ParallelCorpus(std::string name,
                               std::vector<LanguageCode> languages,
                               std::vector<SentenceRow> rows)
    : name_(std::move(name)),
      languages_(std::move(languages)),
      rows_(std::move(rows)) {
  if (languages_.size() < 2) {
    throw ValidationError("a parallel corpus needs at least 2 languages");
  }
  std::set<LanguageCode> seen(languages_.begin(), languages_.end());
  if (seen.size() != languages_.size()) {
    throw ValidationError("duplicate language in corpus header");
  }
  if (rows_.empty()) throw ValidationError("corpus has no rows");

  std::stable_sort(rows_.begin(), rows_.end(),
                   [](const SentenceRow& a, const SentenceRow& b) {
                     return a.id < b.id;
                   });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const SentenceRow& row = rows_[i];
    if (row.id <= 0) {
      throw ValidationError("row id " + std::to_string(row.id) +
                            " is not positive");
    }
    if (i > 0 && rows_[i - 1].id == row.id) {
      throw ValidationError("duplicate row id " + std::to_string(row.id));
    }
    if (row.texts.size() != languages_.size()) {
      throw ValidationError("row " + std::to_string(row.id) +
                            " does not cover every corpus language");
    }
    for (const LanguageCode& lang : languages_) {
      const auto it = row.texts.find(lang);
      if (it == row.texts.end()) {
        throw ValidationError("row " + std::to_string(row.id) +
                              " has no text for '" + lang.str() + "'");
      }
      if (it->second.empty()) {
        throw ValidationError("empty cell at (id=" + std::to_string(row.id) +
                              ", language=" + lang.str() + ")");
      }
      if (!unicode::is_valid_utf8(it->second)) {
        throw ValidationError("invalid UTF-8 at (id=" +
                              std::to_string(row.id) +
                              ", language=" + lang.str() + ")");
      }
    }
  }
}

bool ParallelCorpus::has_language(const LanguageCode& lang) const {
  return std::find(languages_.begin(), languages_.end(), lang) !=
         languages_.end();
}

const std::string& ParallelCorpus::text(std::size_t row_index,
                                        const LanguageCode& lang) const {
  const auto& texts = rows_.at(row_index).texts;
  const auto it = texts.find(lang);
  if (it == texts.end()) throw LookupError(lang.str());
  return it->second;
}

ParallelCorpus parse_corpus(std::string_view source,
                            const CorpusParseOptions& options) {
  std::vector<LanguageCode> languages;
  std::vector<SentenceRow> rows;
  std::set<std::int64_t> ids;
  bool expect_header = options.header_present;
  if (!expect_header) {
    languages = options.languages;
    if (languages.empty()) {
      throw ValidationError("headerless corpus requires explicit languages");
    }
  }

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < source.size()) {
    std::size_t end = source.find('\n', pos);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!unicode::is_valid_utf8(line)) {
      throw ParseError(line_no, "invalid UTF-8");
    }
    const auto cells = split_tabs(line);

    if (expect_header) {
      if (cells.front() != "id") {
        throw ParseError(line_no, "first header cell must be 'id'");
      }
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (!LanguageCode::is_valid(cells[c])) {
          throw ParseError(line_no, "invalid language code '" +
                                        std::string(cells[c]) + "'");
        }
        languages.emplace_back(std::string(cells[c]));
      }
      expect_header = false;
      continue;
    }

    if (cells.size() != languages.size() + 1) {
      throw ParseError(line_no, "expected " +
                                    std::to_string(languages.size() + 1) +
                                    " cells, found " +
                                    std::to_string(cells.size()));
    }
    SentenceRow row;
    const std::string_view id_cell = cells.front();
    const auto [ptr, ec] = std::from_chars(
        id_cell.data(), id_cell.data() + id_cell.size(), row.id);
    if (ec != std::errc() || ptr != id_cell.data() + id_cell.size() ||
        row.id <= 0) {
      throw ParseError(line_no,
                       "id '" + std::string(id_cell) + "' is not a positive integer");
    }
    if (!ids.insert(row.id).second) {
      throw ValidationError("duplicate row id " + std::to_string(row.id) +
                            " (line " + std::to_string(line_no) + ")");
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        throw ValidationError("empty cell at (id=" + std::to_string(row.id) +
                              ", language=" + languages[c - 1].str() + ")");
      }
      row.texts.emplace(languages[c - 1], std::string(cells[c]));
    }
    rows.push_back(std::move(row));
  }
  if (expect_header) throw ParseError(1, "missing header row");
  return ParallelCorpus(options.name, std::move(languages), std::move(rows));
}

ParallelCorpus load_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  CorpusParseOptions options;
  options.name = path.stem().string();
  return parse_corpus(buffer.str(), options);
}

std::string serialize_corpus(const ParallelCorpus& corpus) {
  std::string out = "id";
  for (const LanguageCode& lang : corpus.languages()) {
    out += '\t';
    out += lang.str();
  }
  out += '\n';
  for (const SentenceRow& row : corpus.rows()) {
    out += std::to_string(row.id);
    for (const LanguageCode& lang : corpus.languages()) {
      out += '\t';
      out += row.texts.at(lang);
    }
    out += '\n';
  }
  return out;
}

std::size_t word_count(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto lead = static_cast<unsigned char>(text[pos]);
    char32_t cp = lead;
    if (unicode::sequence_length(lead) > 1 &&
        pos + unicode::sequence_length(lead) <= text.size()) {
      cp = unicode::next_code_point(text, pos);
    } else {
      ++pos;
    }
    const bool space = unicode::is_white_space(cp);
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

}  // namespace tokparity
