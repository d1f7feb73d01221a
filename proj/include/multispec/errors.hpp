#pragma once

#include <stdexcept>
#include <string>

namespace multispec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: malformed matrices, precondition violations, bad model files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Model-file parse failures. The message names the offending key.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Iterative numerics that failed to converge or bracket.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Enumeration caps and other size limits.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace multispec
