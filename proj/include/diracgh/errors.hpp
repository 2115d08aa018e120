#pragma once

#include <stdexcept>
#include <string>

namespace diracgh {

// Base type for every failure this library raises on purpose, so callers can
// catch one thing at the boundary and map it to an exit code or a message.
struct engine_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when V = E - m (in units where c = 1). The transmitted-spinor
// normalization V - E + m vanishes there and the matching amplitudes blow up,
// even though reflection observables stay finite.
struct singular_barrier_error : engine_error {
    using engine_error::engine_error;
};

// Raised when a quantity is requested outside the kinematic regime where it
// is defined (for example a phase shift outside total reflection).
struct regime_error : engine_error {
    using engine_error::engine_error;
};

// Raised by the finite-difference probe when the stencil would leave the
// regime the derivative is taken in.
struct step_error : engine_error {
    using engine_error::engine_error;
};

// Raised when the packet quadrature fails to converge within the panel budget.
struct quadrature_error : engine_error {
    using engine_error::engine_error;
};

} // namespace diracgh
