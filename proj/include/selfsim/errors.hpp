#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested working precision cannot certify the result.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A configured cap (words, closure elements, path length) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace selfsim
