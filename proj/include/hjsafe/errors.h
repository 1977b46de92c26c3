#pragma once

#include <stdexcept>
#include <string>

namespace hjsafe {

// Exception hierarchy. The CLI maps each type onto a distinct exit code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration. Messages carry a dotted field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A solver sweep produced a non-finite value.
class NumericalInstabilityError : public Error {
 public:
  using Error::Error;
};

// Query outside the discretized state space.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hjsafe
