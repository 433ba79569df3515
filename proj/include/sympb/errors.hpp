#pragma once

#include <stdexcept>
#include <string>

namespace sympb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed specs, out-of-range parameters. CLI exit code 2.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A solver or discretisation failed to deliver the requested accuracy. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A built object violates one of its structural invariants.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sympb
