#pragma once

#include <stdexcept>
#include <string>

namespace qfield {

/// Raised when inputs violate an operation's preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for failures reading or writing external data.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qfield
