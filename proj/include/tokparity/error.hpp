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
#include <stdexcept>
#include <string>

namespace tokparity {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (corpus rows, embedding files). `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ModelLoadError : public Error {
 public:
  ModelLoadError(std::size_t line, const std::string& what)
      : Error("model line " + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit ModelLoadError(const std::string& what) : Error(what), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DecodeError : public Error {
 public:
  explicit DecodeError(long long id)
      : Error("unknown token id " + std::to_string(id)), id_(id) {}
  long long id() const { return id_; }

 private:
  long long id_;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& label)
      : Error("unknown label '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class RemoteError : public Error {
 public:
  enum class Kind { kAuth, kRateLimit, kNetwork, kProtocol, kUnsupported };

  RemoteError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(RemoteError::Kind kind);

}  // namespace tokparity
