// Copyright 2026 The estpred Authors
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

#ifndef ESTPRED__ERROR_HPP_
#define ESTPRED__ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace estpred
{

/// Broad failure classes. Each maps onto one CLI exit code.
enum class ErrorKind {
  input,       // unreadable, malformed or inconsistent input data (exit 2)
  contract,    // caller violated an operation's precondition (exit 3)
  numerical,   // an algorithm lost a numerical invariant (exit 4)
};

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error
{
public:
  ParseError(const std::string & source, std::size_t line, const std::string & what)
  : Error(ErrorKind::input, source + ":" + std::to_string(line) + ": " + what), line_(line)
  {
  }
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class DataError : public Error
{
public:
  explicit DataError(const std::string & what) : Error(ErrorKind::input, what) {}
};

/// Expected records are missing from an exchange file.
class CoverageError : public DataError
{
public:
  explicit CoverageError(const std::string & what) : DataError(what) {}
};

/// A record has the wrong shape (for example the wrong number of points).
class FormatError : public DataError
{
public:
  explicit FormatError(const std::string & what) : DataError(what) {}
};

class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string & what) : Error(ErrorKind::input, what) {}
};

class ContractError : public Error
{
public:
  explicit ContractError(const std::string & what) : Error(ErrorKind::contract, what) {}
};

class NumericalError : public Error
{
public:
  explicit NumericalError(const std::string & what) : Error(ErrorKind::numerical, what) {}
};

inline int exit_code_for(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::input:
      return 2;
    case ErrorKind::contract:
      return 3;
    case ErrorKind::numerical:
      return 4;
  }
  return 1;
}

}  // namespace estpred

#endif  // ESTPRED__ERROR_HPP_
