// Slow module property: cutoff robustness of the phase-diagram boundary on
// the full desk sweep. Prints the per-column shift summary and exits
// non-zero if the boundary moves by 2 or more grid cells anywhere when the
// divergence cutoff is raised from 1e6 to 1e9.

#include "zbwg/sweep.hpp"

#include <cmath>
#include <cstdio>

using namespace zbwg;

int main() {
    SweepSpec spec;
    spec.base_config.n_guides = 200;
    spec.base_config.sigma_r = 2.1;
    spec.x = {SweepAxis::OmegaRatio, 0.4, 5.15, 96};
    spec.y = {SweepAxis::GainRatio, 0.0, 1.0, 96};
    spec.plan.z_max = 120.0;
    spec.plan.step = 0.02;
    spec.plan.sample_every = 1000000;
    spec.plan.divergence_cutoff = 1e9;

    const PhaseDiagram diagram = run_sweep(spec);
    const std::vector<double> b9 = diagram.boundary_y;
    const std::vector<double> b6 = diagram.boundary_at_cutoff(1e6);
    const double dy = (spec.y.max - spec.y.min) / (spec.y.count - 1);

    double worst = 0.0;
    double worst_omega = 0.0;
    int over = 0;
    int compared = 0;
    for (std::size_t i = 0; i < b9.size(); ++i) {
        if (std::isnan(b9[i]) || std::isnan(b6[i])) {
            continue;
        }
        ++compared;
        const double cells = std::abs(b9[i] - b6[i]) / dy;
        if (cells >= 2.0) {
            ++over;
        }
        if (cells > worst) {
            worst = cells;
            worst_omega = diagram.x_values[i];
        }
    }
    std::printf("cutoff robustness on the 96x96 sigma_r/kappa = 2.1 desk sweep (z_max = 120):\n");
    std::printf("  boundary columns compared: %d\n", compared);
    std::printf("  columns moving >= 2 cells when the cutoff drops 1e9 -> 1e6: %d\n", over);
    std::printf("  worst shift: %.1f cells at omega/omega0 = %.2f\n", worst, worst_omega);
    if (worst >= 2.0) {
        std::printf("PROPERTY FAILED: boundary is cutoff-sensitive near the resonance basin at\n"
                    "this propagation length; the shift shrinks with z_max (measured ~8 cells at\n"
                    "z=120, ~3 equivalent cells at z=480) but does not reach < 2 at desk cost.\n");
        return 1;
    }
    std::printf("PROPERTY PASSED\n");
    return 0;
}
