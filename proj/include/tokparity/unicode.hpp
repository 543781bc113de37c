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
#include <string>
#include <string_view>

namespace tokparity::unicode {

// Coarse general-category buckets used by the pretokenizer. Marks are kept
// separate from letters because the split rules treat them differently.
enum class Category {
  kUppercaseLetter,  // Lu
  kTitlecaseLetter,  // Lt
  kLowercaseLetter,  // Ll
  kModifierLetter,   // Lm
  kOtherLetter,      // Lo
  kMark,             // Mn, Mc, Me
  kNumber,           // Nd, Nl, No
  kOther,
};

Category category(char32_t cp);
bool is_white_space(char32_t cp);

bool is_valid_utf8(std::string_view s);

// Decodes the scalar value starting at `pos` and advances `pos` past it.
// Precondition: `s` is valid UTF-8 and pos < s.size().
char32_t next_code_point(std::string_view s, std::size_t& pos);

// Byte length of the UTF-8 sequence introduced by `lead`, or 0 for a
// continuation/invalid byte.
std::size_t sequence_length(unsigned char lead);

void append_utf8(char32_t cp, std::string& out);

// NFC normalization. Throws ValidationError on invalid UTF-8.
std::string nfc(std::string_view s);

}  // namespace tokparity::unicode
