#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace medcons {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
  using Error::Error;
};

class DimensionError : public Error {
  using Error::Error;
};

class BoundsError : public Error {
  using Error::Error;
};

class RangeError : public Error {
  using Error::Error;
};

class SizeError : public Error {
  using Error::Error;
};

class ContractError : public Error {
  using Error::Error;
};

}  // namespace medcons
