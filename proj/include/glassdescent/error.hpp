#pragma once

#include <stdexcept>
#include <string>

namespace glassdescent {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidSizeError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class IndexError : public Error {
public:
  using Error::Error;
};

// Raised by the exhaustive oracle when the instance is too large to enumerate.
class GuardError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// A postcondition the library guarantees did not hold. Indicates a bug.
class InvariantError : public Error {
public:
  using Error::Error;
};

} // namespace glassdescent
