#pragma once

#include <stdexcept>
#include <string>

namespace cdk {

// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed inputs: wrong matrix dimensions, mismatched spaces, bad file contents.
struct structural_error : error {
  using error::error;
};

// Invalid generator specification (non-dyadic step, nonpositive weights, ...).
struct spec_error : error {
  using error::error;
};

// A time parameter that is not a multiple of 1/T.
struct grid_error : error {
  using error::error;
};

// Problem too large for an exhaustive routine.
struct size_error : error {
  using error::error;
};

// Restriction or reweighting that keeps zero mass.
struct empty_error : error {
  using error::error;
};

// A coupling atom admits no T-step geodesic.
struct lift_error : error {
  using error::error;
};

// A spliced geodesic pair fails the constant-speed invariant.
struct normalization_error : error {
  using error::error;
};

// A left/right concatenation in the mixing construction is not a geodesic.
struct mix_error : error {
  using error::error;
};

// Violated operation precondition.
struct precondition_error : error {
  using error::error;
};

// The demo generator cannot realize the requested family.
struct construction_error : error {
  using error::error;
};

// IO failures (unreadable/unwritable paths, parse errors).
struct io_error : error {
  using error::error;
};

}  // namespace cdk
