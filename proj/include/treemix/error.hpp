#pragma once

#include <stdexcept>
#include <string>

namespace treemix {

// Malformed or inadmissible input. The message names the offending field.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A materialization or search would exceed the configured node cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integer index arithmetic would overflow.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace treemix
