#pragma once

#include "zbwg/lattice.hpp"

#include <functional>

namespace zbwg {

// Fixed-step RK4 plan. z in units of 1/kappa.
struct PropagationPlan {
    double z_max = 120.0;
    double step = 0.008;
    int sample_every = 5;
    double divergence_cutoff = 1e9; // ratio to the launch intensity

    void validate(double omega) const; // throws ConfigError
};

enum class Termination { Completed, Diverged };

struct PropagationResult {
    FieldState final_state;
    Termination termination = Termination::Completed;
    double max_intensity_ratio = 0.0; // max over all steps of intensity / E_tot0
    long steps_taken = 0;
};

using Observer = std::function<void(const FieldState&)>;

// Integrates the coupled-mode equations with classical RK4. The observer
// (when set) is called on the initial state, every sample_every steps, and
// on the final state. Terminates with Termination::Diverged as soon as the
// total intensity exceeds divergence_cutoff times the launch intensity
// (checked after every step). Throws NonFiniteError if an amplitude stops
// being finite before the cutoff triggers.
PropagationResult propagate(const LatticeConfig& config, const PropagationPlan& plan,
                            const FieldState& initial, const Observer& observer = {});

// Exact propagator for z-independent sigma: exp(-i H z) * initial with
// H[n][n +- 1] = -coupling, H[n][n] = (-1)^n sigma_const (reduced units,
// coupling = 1 matches the propagation kernel; 0 decouples the guides),
// computed by dense eigendecomposition. Oracle for the RK4 path; <= 512 guides.
FieldState exact_propagator_const(const LatticeConfig& config, cplx sigma_const,
                                  double z, const FieldState& initial,
                                  double coupling = 1.0);

} // namespace zbwg
