/*
 * Copyright 2026 The gslearn Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gslearn {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not chain or do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric option or hyper-parameter is outside its documented range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation precondition (e.g. unnormalized rows).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Row normalization hit an all-zero row.
class NormalizationError : public Error {
 public:
  NormalizationError(std::size_t row, const std::string& what)
      : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Input file content is malformed; line() is 1-based, 0 when unknown.
class ValidationError : public Error {
 public:
  ValidationError(std::size_t line, const std::string& what)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint is unreadable or does not fit the model/dataset it is paired with.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

/// Invalid flag combination; raised before any compute starts.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace gslearn
