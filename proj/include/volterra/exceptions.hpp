#pragma once

#include <stdexcept>
#include <string>

namespace volterra {

// Base class for all library failures so callers can catch one type.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kernel L1 mass >= 1: the Neumann series diverges and every bound divides by (1 - mass).
struct mass_exceeds_one : error {
    using error::error;
};

// Piecewise-constant steps that cannot be re-binned exactly.
struct incompatible_step : error {
    using error::error;
};

// Operation undefined for the given kernel variant (e.g. derivative bounds of tabulated data).
struct unsupported_kernel : error {
    using error::error;
};

// Requested truncation tolerance needs more series terms than the configured ceiling.
struct tol_unreachable : error {
    using error::error;
};

// Evaluation time beyond the horizon the object was built for.
struct out_of_horizon : error {
    using error::error;
};

// Sampled signal grid does not match the evaluation grid.
struct grid_mismatch : error {
    using error::error;
};

// A mass bound outside [0, 1) was passed where a contraction is required.
struct invalid_mass : error {
    using error::error;
};

}  // namespace volterra
