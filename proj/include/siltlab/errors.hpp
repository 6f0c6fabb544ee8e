#pragma once

#include <stdexcept>

namespace siltlab {

// Numerical failure (bracket not found, degenerate curve, ...); the batch
// front end maps this to exit code 3, distinct from configuration errors.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace siltlab
