#pragma once

#include <stdexcept>
#include <string>

namespace netsmith {

// Bad inputs: dimension mismatches, out-of-range parameters, malformed files.
using ValidationError = std::invalid_argument;

// Numerical failures: singular systems, unit-circle poles, unstable loops.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netsmith
