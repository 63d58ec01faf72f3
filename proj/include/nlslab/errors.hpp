#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

/// Base class for all library failures that are not plain precondition
/// violations (those throw std::invalid_argument).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A field is too poorly resolved for the requested operation
/// (top-octave spectral audit failed).
struct resolution_error : error {
    using error::error;
};

/// Band-limited rescaling would read or drop mass outside the grids involved.
struct resample_error : error {
    using error::error;
};

/// Wrap-around guard violation: non-negligible mass reached the box boundary,
/// the periodic box is no longer a faithful proxy for R^n.
struct wraparound_error : error {
    using error::error;
};

/// NaN/Inf detected mid-run, or a step policy could not be satisfied.
struct numerics_error : error {
    using error::error;
};

} // namespace nlslab
