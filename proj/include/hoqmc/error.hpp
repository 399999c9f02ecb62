#pragma once

#include <stdexcept>
#include <string>

namespace hoqmc {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit together (matrix/vector extents, point dimensions).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar argument is outside the operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// The request is well-formed but exceeds a precision or enumeration budget.
// Callers get a refusal instead of a truncated or silently wrong answer.
class RefusalError : public Error {
 public:
  using Error::Error;
};

// Malformed textual input (matrix strings, JSON documents, point CSV).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hoqmc
