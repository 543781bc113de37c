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

#include <string>

#include "tokparity/bpe.hpp"
#include "tokparity/error.hpp"
#include "tokparity/unicode.hpp"

namespace tokparity {

namespace {

using unicode::Category;

// Decoded text with byte offsets; invalid bytes become single code points
// in the private range so they fall into the punctuation-like class.
struct CodePoints {
  std::vector<char32_t> cps;
  std::vector<std::size_t> offsets;  // size() == cps.size() + 1
};

CodePoints decode_lossy(std::string_view text) {
  CodePoints out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    out.offsets.push_back(pos);
    const std::size_t len =
        unicode::sequence_length(static_cast<unsigned char>(text[pos]));
    if (len > 0 && pos + len <= text.size() &&
        unicode::is_valid_utf8(text.substr(pos, len))) {
      out.cps.push_back(unicode::next_code_point(text, pos));
    } else {
      out.cps.push_back(0xF0000 + static_cast<unsigned char>(text[pos]));
      ++pos;
    }
  }
  out.offsets.push_back(text.size());
  return out;
}

bool is_letter(Category c) {
  return c == Category::kUppercaseLetter || c == Category::kTitlecaseLetter ||
         c == Category::kLowercaseLetter || c == Category::kModifierLetter ||
         c == Category::kOtherLetter;
}

// Split rules of the o200k_base pattern, one alternative per method, tried
// in pattern order. Each returns the end index of the match or 0.
class CategoryScanner {
 public:
  explicit CategoryScanner(const std::vector<char32_t>& cps) : cps_(cps) {
    cats_.reserve(cps.size());
    space_.reserve(cps.size());
    for (char32_t cp : cps) {
      cats_.push_back(unicode::category(cp));
      space_.push_back(unicode::is_white_space(cp));
    }
  }

  std::size_t match(std::size_t i) const {
    std::size_t end = 0;
    if (prefixable(i) && (end = lower_word(i + 1))) return end;
    if ((end = lower_word(i))) return end;
    if (prefixable(i) && (end = upper_word(i + 1))) return end;
    if ((end = upper_word(i))) return end;
    if ((end = digits(i))) return end;
    if ((end = punctuation(i))) return end;
    if ((end = newline_run(i))) return end;
    if ((end = trailing_space(i))) return end;
    return space_run(i);
  }

 private:
  std::size_t n() const { return cps_.size(); }

  bool is_crlf(std::size_t i) const {
    return cps_[i] == U'\r' || cps_[i] == U'\n';
  }
  bool is_l(std::size_t i) const { return is_letter(cats_[i]); }
  bool is_n(std::size_t i) const { return cats_[i] == Category::kNumber; }
  // [^\r\n\p{L}\p{N}]
  bool prefixable(std::size_t i) const {
    return i < n() && !is_crlf(i) && !is_l(i) && !is_n(i);
  }
  // [\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]
  bool upper_like(std::size_t i) const {
    const Category c = cats_[i];
    return c == Category::kUppercaseLetter ||
           c == Category::kTitlecaseLetter ||
           c == Category::kModifierLetter || c == Category::kOtherLetter ||
           c == Category::kMark;
  }
  // [\p{Ll}\p{Lm}\p{Lo}\p{M}]
  bool lower_like(std::size_t i) const {
    const Category c = cats_[i];
    return c == Category::kLowercaseLetter ||
           c == Category::kModifierLetter || c == Category::kOtherLetter ||
           c == Category::kMark;
  }

  static bool folds_to(char32_t cp, char ascii) {
    if (cp == static_cast<char32_t>(ascii) ||
        cp == static_cast<char32_t>(ascii - 'a' + 'A')) {
      return true;
    }
    return ascii == 's' && cp == 0x017F;  // LATIN SMALL LETTER LONG S
  }

  // (?i:'s|'t|'re|'ve|'m|'ll|'d)?
  std::size_t contraction(std::size_t j) const {
    if (j >= n() || cps_[j] != U'\'') return j;
    auto at = [&](std::size_t k, char c) {
      return k < n() && folds_to(cps_[k], c);
    };
    for (char c : {'s', 't'}) {
      if (at(j + 1, c)) return j + 2;
    }
    if (at(j + 1, 'r') && at(j + 2, 'e')) return j + 3;
    if (at(j + 1, 'v') && at(j + 2, 'e')) return j + 3;
    if (at(j + 1, 'm')) return j + 2;
    if (at(j + 1, 'l') && at(j + 2, 'l')) return j + 3;
    if (at(j + 1, 'd')) return j + 2;
    return j;
  }

  // upper_like* lower_like+ contraction?
  std::size_t lower_word(std::size_t j) const {
    std::size_t k = j;
    while (k < n() && upper_like(k)) ++k;
    std::size_t end = 0;
    if (k < n() && lower_like(k)) {
      end = k;
      while (end < n() && lower_like(end)) ++end;
    } else {
      // Give back upper-like characters until one can start the lowercase
      // run; that run then stops at the next non-lowercase character.
      std::size_t m = k;
      while (m > j && !lower_like(m - 1)) --m;
      if (m == j) return 0;
      end = m;
    }
    return contraction(end);
  }

  // upper_like+ lower_like* contraction?
  std::size_t upper_word(std::size_t j) const {
    std::size_t k = j;
    while (k < n() && upper_like(k)) ++k;
    if (k == j) return 0;
    while (k < n() && lower_like(k)) ++k;
    return contraction(k);
  }

  // \p{N}{1,3}
  std::size_t digits(std::size_t i) const {
    std::size_t k = i;
    while (k < n() && k - i < 3 && is_n(k)) ++k;
    return k == i ? 0 : k;
  }

  // ' ?[^\s\p{L}\p{N}]+[\r\n/]*'
  std::size_t punctuation(std::size_t i) const {
    std::size_t k = cps_[i] == U' ' ? i + 1 : i;
    const std::size_t start = k;
    while (k < n() && !space_[k] && !is_l(k) && !is_n(k)) ++k;
    if (k == start) return 0;
    while (k < n() && (is_crlf(k) || cps_[k] == U'/')) ++k;
    return k;
  }

  std::size_t space_end(std::size_t i) const {
    std::size_t k = i;
    while (k < n() && space_[k]) ++k;
    return k;
  }

  // \s*[\r\n]+
  std::size_t newline_run(std::size_t i) const {
    const std::size_t e = space_end(i);
    for (std::size_t m = e; m > i; --m) {
      if (is_crlf(m - 1)) return m;
    }
    return 0;
  }

  // \s+(?!\S)
  std::size_t trailing_space(std::size_t i) const {
    const std::size_t e = space_end(i);
    if (e == i) return 0;
    if (e == n()) return e;
    return e - 1 > i ? e - 1 : 0;
  }

  // \s+
  std::size_t space_run(std::size_t i) const {
    const std::size_t e = space_end(i);
    return e == i ? 0 : e;
  }

  const std::vector<char32_t>& cps_;
  std::vector<Category> cats_;
  std::vector<bool> space_;
};

}  // namespace

const char* to_string(PretokenMode mode) {
  switch (mode) {
    case PretokenMode::kNone:
      return "none";
    case PretokenMode::kWhitespace:
      return "whitespace";
    case PretokenMode::kUnicodeCategory:
      return "unicode-category";
  }
  return "?";
}

PretokenMode pretoken_mode_from_string(std::string_view name) {
  if (name == "none") return PretokenMode::kNone;
  if (name == "whitespace") return PretokenMode::kWhitespace;
  if (name == "unicode-category") return PretokenMode::kUnicodeCategory;
  throw ValidationError("unknown pretokenizer mode '" + std::string(name) + "'");
}

std::vector<ByteSpan> pretokenize(std::string_view text, PretokenSpec spec) {
  std::vector<ByteSpan> chunks;
  if (text.empty()) return chunks;
  if (spec.mode == PretokenMode::kNone) {
    chunks.push_back({0, text.size()});
    return chunks;
  }
  const CodePoints decoded = decode_lossy(text);
  const std::size_t n = decoded.cps.size();
  auto emit = [&](std::size_t from, std::size_t to) {
    chunks.push_back({decoded.offsets[from],
                      decoded.offsets[to] - decoded.offsets[from]});
  };

  if (spec.mode == PretokenMode::kWhitespace) {
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < n) {
      while (i < n && unicode::is_white_space(decoded.cps[i])) ++i;
      while (i < n && !unicode::is_white_space(decoded.cps[i])) ++i;
      emit(start, i);
      start = i;
    }
    return chunks;
  }

  const CategoryScanner scanner(decoded.cps);
  std::size_t i = 0;
  while (i < n) {
    std::size_t end = scanner.match(i);
    if (end <= i) end = i + 1;  // unreachable: every code point matches
    emit(i, end);
    i = end;
  }
  return chunks;
}

}  // namespace tokparity
