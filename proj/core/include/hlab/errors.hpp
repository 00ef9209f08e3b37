#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlab {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or allocation guard was hit.
class SizeLimitError : public Error {
 public:
  SizeLimitError(const std::string& what, std::size_t bound)
      : Error(what + " (limit " + std::to_string(bound) + ")"), bound_(bound) {}
  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t bound_;
};

class MalformedInputError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A profile evaluated to a negative or non-finite value, or failed its symmetry check.
class ProfileValidityError : public Error {
 public:
  using Error::Error;
};

/// A mathematical hypothesis of a construction does not hold (unbounded profile,
/// measure charging below the required lower bound, asymmetric spectral density).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  NumericError(const std::string& what, long iterations = -1)
      : Error(what), iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

/// Syntax error in a profile expression or measure literal. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position, std::vector<std::string> expected = {})
      : Error(what), position_(position), expected_(std::move(expected)) {}
  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t position)
      : ParseError("unknown identifier '" + name + "' at position " + std::to_string(position),
                   position),
        name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Invalid command line or configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hlab
