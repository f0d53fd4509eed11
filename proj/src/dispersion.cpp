#include "zbwg/dispersion.hpp"

#include "zbwg/errors.hpp"

#include <cmath>
#include <complex>

namespace zbwg {

std::pair<cplx, cplx> dispersion_exact(double kappa, cplx sigma, double q) {
    const double c = std::cos(q);
    const cplx radicand = sigma * sigma + cplx(4.0 * kappa * kappa * c * c, 0.0);
    const cplx plus = std::sqrt(radicand);
    return {plus, -plus};
}

std::pair<cplx, cplx> dispersion_small_imag(double kappa, double sigma_r,
                                            double sigma_i, double q) {
    const double c = std::cos(q);
    const double d = sigma_r * sigma_r - sigma_i * sigma_i + 4.0 * kappa * kappa * c * c;
    if (!(d > 0.0)) {
        throw ExpansionError("dispersion_small_imag: sigma_r^2 - sigma_i^2 + 4 kappa^2 cos^2(qa) must be > 0");
    }
    const cplx plus = std::sqrt(d) * cplx(1.0, sigma_r * sigma_i / d);
    return {plus, -plus};
}

} // namespace zbwg
