#pragma once

#include <stdexcept>
#include <string>

namespace gmnb {

// Error taxonomy shared by the library and the CLI exit codes:
// validation (2), numeric (3), io (4).
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: parameter domain violations, contract/shape mismatches.
struct validation_error : error {
  using error::error;
};

// Numeric invariant violations inside the sampler (should not happen on
// valid inputs; carries enough context to locate the offending state).
struct numeric_error : error {
  using error::error;
};

struct io_error : error {
  using error::error;
};

}  // namespace gmnb
