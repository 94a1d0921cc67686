#pragma once

#include <stdexcept>
#include <string>

namespace momrec {

// Malformed input files (problem specs, moment files, CSV). Messages carry
// file and line where available.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure that is not a caller bug: solver divergence, iteration
// limits, state escape during integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace momrec
