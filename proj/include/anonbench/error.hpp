// Copyright 2026 The anonbench Authors.
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

namespace anonbench {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value (n < 1, unknown strategy id, length mismatch...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Data violates a documented invariant (span bounds, duplicate ids...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Network-level failure, or retries exhausted.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status = 0)
      : Error(what), status_(status) {}
  /// HTTP status when one was received, 0 otherwise.
  int status() const { return status_; }

 private:
  int status_;
};

/// The remote answered but the answer is unusable.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Input for which a statistic is undefined (e.g. all-tied Kendall side).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class DeserializationError : public Error {
 public:
  DeserializationError(const std::string& what, std::string path)
      : Error(what), path_(std::move(path)) {}
  /// Dotted path of the offending element, e.g. `task_cells[2].result`.
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// One element of a batch failed; the batch is aborted.
class BatchError : public Error {
 public:
  BatchError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace anonbench
