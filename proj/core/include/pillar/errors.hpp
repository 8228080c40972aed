//
// Copyright 2026 The Pillar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PILLAR_ERRORS_HPP_
#define PILLAR_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pillar {

// Root of all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ZeroVectorError : public Error {
 public:
  using Error::Error;
};

class BadFractionError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

class BadKError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class BadBudgetError : public Error {
 public:
  using Error::Error;
};

class BadZetaError : public Error {
 public:
  using Error::Error;
};

class EmptyCandidatesError : public Error {
 public:
  using Error::Error;
};

class NonFiniteUtilityError : public Error {
 public:
  using Error::Error;
};

class BadSigmaError : public Error {
 public:
  using Error::Error;
};

// calibrate_dpsgd_sigma could not reach the target epsilon with any
// noise multiplier below its search ceiling.
class UnreachableError : public Error {
 public:
  using Error::Error;
};

class BadScheduleError : public Error {
 public:
  using Error::Error;
};

class InfeasibleParamsError : public Error {
 public:
  using Error::Error;
};

// Feature-file parse failure; carries the 1-based row and column where the
// problem was found (0 means "not applicable").
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what + " (row " + std::to_string(row) + ", col " +
              std::to_string(col) + ")"),
        row_(row),
        col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class InconsistentWidthError : public Error {
 public:
  using Error::Error;
};

class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pillar

#endif  // PILLAR_ERRORS_HPP_
