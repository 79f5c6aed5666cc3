/*
 * Copyright 2026 The cltq Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLTQ_ERROR_HPP_
#define CLTQ_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cltq {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line),
        detail_(message) {}

  std::size_t line() const { return line_; }
  // The message without the line prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Structurally valid input that violates a file-level contract (mixed labeling, empty file).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Missing, unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cltq

#endif  // CLTQ_ERROR_HPP_
