#pragma once

#include <stdexcept>

namespace effdf {

// Invalid caller input: bad component values, malformed files, bad flags.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The synthesis has no information (e.g. every variance is zero).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace effdf
