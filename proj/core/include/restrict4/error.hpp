#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace restrict4 {

/// Non-fatal diagnostics accumulated by an operation (constant term dropped,
/// convexity sample failed, degenerate principal face, ...).
using Warnings = std::vector<std::string>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial text did not conform to the grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Input is well-formed but mathematically unusable (empty Taylor support,
/// singular coordinate change, ...).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Precondition on a numeric argument violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace restrict4
