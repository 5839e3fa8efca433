#pragma once

#include <stdexcept>
#include <string>

namespace pfno {

// Bad input: wrong sizes, out-of-range parameters, missing files.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed snapshot or checkpoint bytes.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Blow-up, non-finite loss, non-positive SAV denominator.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pfno
