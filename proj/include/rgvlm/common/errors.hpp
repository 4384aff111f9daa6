#pragma once

#include <stdexcept>
#include <string>

namespace rgvlm {

// Base for everything we throw on purpose. The CLI maps subclasses to exit
// codes: ValidationError -> 1, BackendError -> 2, NumericsError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, unreadable dataset, impossible request.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A file on disk does not match the expected schema.
class DataFormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The annotation backend failed after retries (transport, HTTP status, ...).
class BackendError : public Error {
 public:
  using Error::Error;
};

// Training produced non-finite numbers.
class NumericsError : public Error {
 public:
  using Error::Error;
};

}  // namespace rgvlm
