#pragma once

#include <stdexcept>
#include <string>

namespace zbwg {

// Invalid or inconsistent configuration (bad parameter values, malformed
// config files, violated preconditions that a caller could have checked).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An amplitude became non-finite before the divergence cutoff triggered;
// usually means the integrator step is too large.
struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense eigendecomposition failed to converge.
struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Doubling the k-node count moved a reported value by more than the
// stability tolerance; the spectral grid does not resolve the integrand.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No spectral peak above the noise floor.
struct NoPeakError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The small-sigma_i dispersion expansion was evaluated outside its
// validity region.
struct ExpansionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Total intensity underflowed to zero where a normalized observable was
// requested.
struct ZeroFieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Phase-diagram boundary coverage too sparse for valley detection.
struct TooCoarseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace zbwg
