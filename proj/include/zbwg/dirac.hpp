#pragma once

#include "zbwg/lattice.hpp"

#include <vector>

namespace zbwg {

// Parameters of the equivalent one-dimensional Dirac problem. In the
// reduced units produced by map_lattice_to_dirac, kappa (the light-speed
// equivalent) is 1 and t is the propagation distance in units of 1/kappa.
struct DiracParams {
    double kappa = 1.0;
    double sigma_r = 2.1;      // rest-mass equivalent
    double sigma_i_amp = 0.0;  // gain_ratio_r * sigma_r
    double omega = 3.0;

    void validate() const;
};

struct DiracMapping {
    DiracParams params;         // reduced units, kappa = 1
    double kappa_physical;      // light-speed equivalent, same value/units as config.kappa
    double sigma_r_physical;    // mass-term rate in config.kappa units * kappa
    double envelope_width;      // Gaussian envelope width in unit cells (spot/(2a))
};

// kappa <-> c, sigma <-> m c^2 / hbar; the translation preserves the values.
DiracMapping map_lattice_to_dirac(const LatticeConfig& config);

// Spinor view of a lattice field: psi1[m] = (-1)^m a_{2m},
// psi2[m] = i (-1)^m a_{2m-1} (a_{-1} = 0, open boundary). One entry per
// two-guide cell; |psi1|^2 and |psi2|^2 are the sublattice intensities.
struct SpinorField {
    std::vector<cplx> psi1;
    std::vector<cplx> psi2;
};
SpinorField spinor_components(const FieldState& state);

// Symmetric Gauss-Legendre grid over the Gaussian angular spectrum
// G(k) = C exp(-k^2 width^2 / 2), truncated where G/G(0) < 1e-8 and
// normalized so that sum(4 pi w G^2) = 1.
struct SpectralGrid {
    std::vector<double> k_nodes;
    std::vector<double> weights;
    std::vector<double> g_values;
    std::vector<double> g_derivs;
    double width = 0.0;
    double k_max = 0.0;

    double norm_check() const; // sum of 4 pi w G^2, should be 1
};
SpectralGrid make_spectral_grid(double envelope_width_cells, int n_nodes = 257);

// A(t) = sqrt(kappa^2 k^2 t^2 + (sigma_r t - i sigma_i (cos(omega t)-1)/omega)^2)
// on the branch that is continuous in t and matches +t*sqrt(kappa^2 k^2 +
// sigma_r^2) for small t. Computed as sqrt(kappa k t + iB) * sqrt(kappa k t - iB)
// with B = -sigma_r t + i sigma_i (cos(omega t)-1)/omega; both factors stay in
// one half-plane (Im = -/+ sigma_r t), so the principal square roots are
// continuous without history. For sigma_i = 0 the product reduces to the real
// value t * hypot(kappa k, sigma_r).
cplx a_of_t(const DiracParams& params, double k, double t);

struct SpinorPair {
    cplx psi1;
    cplx psi2;
};

// psi_k(t) = G(k) [cos A + i (sin A / A)(-kappa k t + B),
//                  cos A + i (sin A / A)(-kappa k t - B)]
// under the commuting-Hamiltonian approximation, initial spinor G(k)[1,1].
std::vector<SpinorPair> spinor_evolution(const DiracParams& params,
                                         const SpectralGrid& grid, double t);

struct DiracPrediction {
    std::vector<double> t;
    std::vector<cplx> xi_drift;         // drift numerator
    std::vector<cplx> xi_zb;            // trembling numerator
    std::vector<cplx> xi_im;            // purely imaginary numerator
    std::vector<double> psi_norm_sq;    // |psi(t)|^2, stays >= 1 - 1e-9
    std::vector<double> xi_expectation; // Re[(xi_d + xi_zb + xi_im)/|psi|^2], unit cells
    std::vector<cplx> zb_kernel;        // sin(A) conj(cos(A)) at k = 0
};

struct PredictionOptions {
    bool check_quadrature = true; // re-evaluate on a doubled grid and compare
    double stability_tol = 1e-6;  // sup-norm relative, per reported quantity
    bool parallel = true;         // OpenMP over time samples
};

// k-space quadrature of the position-expectation decomposition and of
// |psi(t)|^2 at each requested time. Throws QuadratureError when doubling
// the node count moves any reported series by more than stability_tol
// (relative to the series' own scale).
DiracPrediction prediction(const DiracParams& params, const SpectralGrid& grid,
                           const std::vector<double>& times,
                           const PredictionOptions& options = {});

} // namespace zbwg
