#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmetric {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: mismatched grids, unknown parameter, invalid argument.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown: non-finite samples, hermiticity residual breach, overflow.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Expression syntax or identifier error. Carries the byte offset into the
// source text at which the problem was detected.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Invalid run configuration. line is 1-based (0 when not tied to a file
// location), field names the offending "section.key" when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0,
                       std::string field = {})
      : Error(what), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace qmetric
