#pragma once

#include <stdexcept>
#include <string>

namespace ekch {

/// Non-finite values where finite ones are required, or a solver produced NaN.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fields or kernels living on incompatible grids.
struct dimension_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Kernel radius not resolved by enough cells (eta < 4*dx).
struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Kernel support would wrap around the torus (eta >= L/2).
struct support_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Kernel hat touches 1 at a nonzero mode; the nonlocal Poincare inequality degenerates.
struct singular_kernel_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 1/eta^2 + F'' dips below zero on the requested range; phi loses monotonicity.
struct ellipticity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested dt violates the stability precondition of a stepper.
struct step_size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Density fell below the allowed negative roundoff band.
struct positivity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Experiment configuration rejected; message names the offending field.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Precondition of a diagnostic not met (e.g. mean-mismatched Poincare control).
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ekch
