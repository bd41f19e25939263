#pragma once

#include <stdexcept>
#include <string>

namespace spinal {

// Raised when an operation's precondition or a validation fails.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (text formats, scenario documents, unknown names).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinal
