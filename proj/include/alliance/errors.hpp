// Copyright 2026 The Alliance Eval Authors.
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

#ifndef ALLIANCE_ERRORS_HPP_
#define ALLIANCE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace alliance {

// Base for every error raised on bad data or configuration. The CLI maps
// these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FileError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `line` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Schema violations collected over a whole input.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Wrong number of items, records or columns.
class CardinalityError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class MissingDataError : public Error {
 public:
  explicit MissingDataError(const std::string& what,
                            const std::vector<std::string>& missing = {})
      : Error(what), missing_(missing) {}
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

// Network or HTTP failure talking to a remote endpoint. Transient
// failures (connection errors, 429, 5xx) are eligible for retry.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool transient, int status = 0)
      : Error(what), transient_(transient), status_(status) {}
  bool transient() const { return transient_; }
  int status() const { return status_; }

 private:
  bool transient_;
  int status_;
};

// A remote service answered with a body that breaks its wire contract.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient design or too few residual degrees of freedom.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace alliance

#endif  // ALLIANCE_ERRORS_HPP_
