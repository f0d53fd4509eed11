#pragma once

#include "zbwg/numerics.hpp"

#include <complex>
#include <vector>

namespace zbwg {

// Binary waveguide superlattice (two interleaved species A/B) with a
// z-periodic gain/loss modulation sigma(z) = sigma_r + i*r*sigma_r*sin(omega z).
//
// Unit conventions: rates (sigma_r, omega, omega0) are stored in units of
// the coupling constant kappa, and z is measured in units of 1/kappa, so
// the coupling is 1 in the equations of motion. `kappa` keeps the physical
// value (1/mm) only for converting z back to millimetres in reports.
// Transverse lengths (spacing_a, spot_size, wavelength) are micrometres;
// transverse positions are reported in units of spacing_a.
struct LatticeConfig {
    int n_guides = 200;
    double spacing_a = 16.0;   // um
    double kappa = 0.14;       // 1/mm (physical coupling rate)
    double sigma_r = 2.1;      // units of kappa
    double gain_ratio_r = 0.0; // r = sigma_i amplitude / sigma_r
    double omega = 3.0;        // units of kappa
    double omega0 = 1.0;       // units of kappa; reporting scale for omega/omega0
    double wavelength = 0.633; // um
    double n_substrate = 1.5;
    double spot_size = 105.0;  // um, 1/e-intensity half-width of the envelope

    void validate() const; // throws ConfigError

    double omega_ratio() const { return omega / omega0; }
    // Envelope width in units of the guide spacing.
    double spot_in_a() const { return spot_size / spacing_a; }
    // Envelope width in unit cells (one A-B pair spans 2a).
    double spot_in_cells() const { return spot_size / (2.0 * spacing_a); }
    // Transverse guide position in units of a, measured from the array center.
    double guide_position(int n) const { return static_cast<double>(n - n_guides / 2); }
};

// Complex amplitudes of all guides at propagation distance z (units 1/kappa).
struct FieldState {
    double z = 0.0;
    std::vector<cplx> amplitudes;
};

// sigma(z) = sigma_r * (1 + i * r * sin(omega z)), in units of kappa.
cplx sigma_at(const LatticeConfig& config, double z);

// Right-hand side of i da_n/dz = -(a_{n+1} + a_{n-1}) + (-1)^n sigma(z) a_n
// (coupling = 1 in reduced units), open boundaries, guide 0 carries +sigma.
void coupled_mode_rhs(const LatticeConfig& config, double z,
                      const std::vector<cplx>& a, std::vector<cplx>& dadz);
std::vector<cplx> coupled_mode_rhs(const LatticeConfig& config, const FieldState& state);

// Gaussian beam centered on the array, tilted to the first Bragg angle:
// a_n = exp(-x_n^2 / (2 spot^2)) * exp(i pi n / 2). The tilt places the
// spectral weight at the Brillouin-zone edge q = pi/(2a). Throws ConfigError
// when the envelope tail at the array edge exceeds 1e-6 of the peak.
FieldState initial_gaussian_field(const LatticeConfig& config);

double total_intensity(const FieldState& state);

} // namespace zbwg
