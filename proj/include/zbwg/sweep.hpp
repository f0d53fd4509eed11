#pragma once

#include "zbwg/diagnostics.hpp"
#include "zbwg/propagator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zbwg {

enum class SweepAxis { GainRatio, OmegaRatio, SigmaRatio, InverseOmega };

std::string axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);

struct AxisSpec {
    SweepAxis axis = SweepAxis::OmegaRatio;
    double min = 0.0;
    double max = 1.0;
    int count = 96;
};

struct SweepSpec {
    AxisSpec x;
    AxisSpec y;
    LatticeConfig base_config;
    PropagationPlan plan;

    void validate() const; // throws ConfigError
};

struct PhaseCell {
    double log10_max = 0.0;
    PhaseClass phase = PhaseClass::PseudoPt;
    bool non_finite = false; // amplitudes overflowed before the cutoff fired
};

struct ValleyReport {
    std::vector<double> positions;      // omega/omega0 of each valley, descending
    std::vector<double> inverse_ratios; // (1/omega_i) / (1/omega_1) = omega_1/omega_i
    double base_frequency = 0.0;        // omega/omega0 of the rightmost valley
};

struct PhaseDiagram {
    AxisSpec x_axis;
    AxisSpec y_axis;
    std::vector<double> x_values;
    std::vector<double> y_values;
    std::vector<PhaseCell> cells; // row-major, index iy * nx + ix
    std::vector<double> boundary_y; // per column; NaN where no breaking cell
    double divergence_cutoff = 1e9;
    std::optional<ValleyReport> valleys;

    const PhaseCell& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * x_values.size() + ix]; }
    // Boundary re-extracted at a different cutoff from the stored log-max values.
    std::vector<double> boundary_at_cutoff(double cutoff) const;
};

enum class ExecMode { Serial, Parallel };

// Evaluates every grid cell independently: builds the cell's config,
// propagates the shared initial wave packet, and classifies against the
// plan's divergence cutoff. Cells that go non-finite are recorded as
// PT-breaking with a flag; the sweep never aborts. Serial and parallel
// execution produce bit-identical grids.
PhaseDiagram run_sweep(const SweepSpec& spec, ExecMode mode = ExecMode::Parallel,
                       int workers = 0);

// Local minima of the boundary curve r*(omega), window +-2 columns,
// prominence at least one grid row, columns below low_omega_floor excluded.
// Requires an omega-bearing x axis, a gain-ratio y axis and >= 64 columns;
// throws TooCoarseError when fewer than half the eligible columns carry a
// boundary value.
ValleyReport detect_valleys(const PhaseDiagram& diagram, double low_omega_floor = 0.3,
                            int window = 2, double prominence_rows = 1.0);

} // namespace zbwg
