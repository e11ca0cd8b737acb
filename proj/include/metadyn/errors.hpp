#pragma once

#include <stdexcept>
#include <string>

namespace metadyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed coordinates or weights (sizes, all-zero weights, non-finite values).
class InvalidStructure : public Error {
 public:
  using Error::Error;
};

// Rotation derivative requested for a fit whose smallest eigenvalue is not isolated.
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class OutOfGrid : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace metadyn
