#pragma once

#include <stdexcept>
#include <string>

namespace pbqr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bilinear coefficient is positive where a submodular quadratic is required.
struct NotSubmodularQuadratic : Error {
  using Error::Error;
};

// An exhaustive routine was asked to enumerate beyond its hard cap.
struct SizeLimitExceeded : Error {
  using Error::Error;
};

// Partition shape that valid (non-negative slope) AV parameters cannot produce.
struct ForbiddenConfiguration : Error {
  using Error::Error;
};

struct PreconditionViolation : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

}  // namespace pbqr
