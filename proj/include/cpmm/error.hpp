#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpmm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The closed form is only stated for γ̂ ≥ γ̂*; raised outside that regime.
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Structurally valid values that do not fit together (length mismatch,
/// record outside a block range, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A malformed line in an ingested file. `line()` is 1-based and counts the
/// header.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cpmm
