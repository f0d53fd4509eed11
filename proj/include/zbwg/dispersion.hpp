#pragma once

#include "zbwg/numerics.hpp"

#include <utility>

namespace zbwg {

// One point of the two-band Bloch dispersion. q in units of 1/a.
struct BlochPoint {
    double q = 0.0;
    cplx sigma;
    std::pair<cplx, cplx> omega_pm;
};

// omega_pm = +/- sqrt(sigma^2 + 4 kappa^2 cos^2(q a)). Plus branch first,
// ordered by positive real part (tie: positive imaginary part), which is
// exactly the principal square root.
std::pair<cplx, cplx> dispersion_exact(double kappa, cplx sigma, double q);

// First-order expansion in small sigma_i:
// +/- sqrt(sigma_r^2 - sigma_i^2 + 4 kappa^2 cos^2(qa)) *
//     (1 + i sigma_r sigma_i / (sigma_r^2 - sigma_i^2 + 4 kappa^2 cos^2(qa))).
// Throws ExpansionError when the radicand is not positive.
std::pair<cplx, cplx> dispersion_small_imag(double kappa, double sigma_r,
                                            double sigma_i, double q);

} // namespace zbwg
