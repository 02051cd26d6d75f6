// Copyright 2026 The Distillens Authors.
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

#ifndef DISTILLENS_ERRORS_H_
#define DISTILLENS_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distillens {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written. The CLI maps this to exit 2.
class IoError : public Error {
 public:
  using Error::Error;
};

// Violated precondition or invalid data content. The CLI maps this to exit 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `line` is 1-based (0 when parsing a lone string),
// `token` is the 1-based token offset within the line (0 when not
// applicable).
class ParseError : public DomainError {
 public:
  ParseError(const std::string &what, std::size_t line, std::size_t token = 0)
      : DomainError(what), line_(line), token_(token) {}

  std::size_t line() const { return line_; }
  std::size_t token() const { return token_; }

 private:
  std::size_t line_;
  std::size_t token_;
};

// Source and target sides of a parallel corpus differ in length.
class LineCountMismatch : public DomainError {
 public:
  LineCountMismatch(const std::string &what, std::size_t source_lines,
                    std::size_t target_lines)
      : DomainError(what),
        source_lines_(source_lines),
        target_lines_(target_lines) {}

  std::size_t source_lines() const { return source_lines_; }
  std::size_t target_lines() const { return target_lines_; }

 private:
  std::size_t source_lines_;
  std::size_t target_lines_;
};

}  // namespace distillens

#endif  // DISTILLENS_ERRORS_H_
