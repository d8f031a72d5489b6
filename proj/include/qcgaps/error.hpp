#pragma once

#include <stdexcept>
#include <string>

namespace qcgaps {

// Bad input: non-squarefree d, window not containing the origin, singular matrix, ...
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A requested shortcut does not apply to the given input (caller may fall back).
class InapplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact integer arithmetic would leave its guaranteed range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace qcgaps
