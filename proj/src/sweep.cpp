#include "zbwg/sweep.hpp"

#include "zbwg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zbwg {

std::string axis_name(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::GainRatio: return "r";
    case SweepAxis::OmegaRatio: return "omega_ratio";
    case SweepAxis::SigmaRatio: return "sigma_ratio";
    case SweepAxis::InverseOmega: return "inv_omega";
    }
    return "?";
}

SweepAxis axis_from_name(const std::string& name) {
    if (name == "r") return SweepAxis::GainRatio;
    if (name == "omega_ratio") return SweepAxis::OmegaRatio;
    if (name == "sigma_ratio") return SweepAxis::SigmaRatio;
    if (name == "inv_omega") return SweepAxis::InverseOmega;
    throw ConfigError("unknown sweep axis '" + name + "' (expected r, omega_ratio, sigma_ratio or inv_omega)");
}

namespace {

void apply_axis(LatticeConfig& config, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::GainRatio:
        config.gain_ratio_r = value;
        break;
    case SweepAxis::OmegaRatio:
        config.omega = value * config.omega0;
        break;
    case SweepAxis::SigmaRatio:
        config.sigma_r = value;
        break;
    case SweepAxis::InverseOmega:
        config.omega = config.omega0 / value;
        break;
    }
}

double max_omega_of(const SweepSpec& spec) {
    double omega = spec.base_config.omega;
    for (const AxisSpec* a : {&spec.x, &spec.y}) {
        if (a->axis == SweepAxis::OmegaRatio) {
            omega = std::max(a->min, a->max) * spec.base_config.omega0;
        } else if (a->axis == SweepAxis::InverseOmega) {
            omega = spec.base_config.omega0 / std::min(a->min, a->max);
        }
    }
    return omega;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

PhaseCell evaluate_cell(const SweepSpec& spec, const FieldState& initial,
                        double xv, double yv) {
    LatticeConfig config = spec.base_config;
    apply_axis(config, spec.x.axis, xv);
    apply_axis(config, spec.y.axis, yv);

    PhaseCell cell;
    try {
        const PropagationResult r = propagate(config, spec.plan, initial);
        cell.log10_max = std::log10(std::max(r.max_intensity_ratio, 1e-300));
        cell.phase = (r.termination == Termination::Diverged) ? PhaseClass::PtBreaking
                                                              : PhaseClass::PseudoPt;
        cell.non_finite = false;
    } catch (const NonFiniteError&) {
        cell.log10_max = std::log10(spec.plan.divergence_cutoff);
        cell.phase = PhaseClass::PtBreaking;
        cell.non_finite = true;
    }
    return cell;
}

void extract_boundary(PhaseDiagram& diagram) {
    diagram.boundary_y = diagram.boundary_at_cutoff(diagram.divergence_cutoff);
}

} // namespace

void SweepSpec::validate() const {
    base_config.validate();
    if (x.count < 8 || y.count < 8) {
        throw ConfigError("sweep: grid sizes must be >= 8");
    }
    for (const AxisSpec* a : {&x, &y}) {
        if (!std::isfinite(a->min) || !std::isfinite(a->max) || !(a->min < a->max)) {
            throw ConfigError("sweep: axis range must be finite and ordered");
        }
        if (a->axis == SweepAxis::InverseOmega && !(a->min > 0.0)) {
            throw ConfigError("sweep: inv_omega axis requires min > 0");
        }
        if ((a->axis == SweepAxis::OmegaRatio || a->axis == SweepAxis::SigmaRatio) && a->min < 0.0) {
            throw ConfigError("sweep: axis range must be non-negative");
        }
        if (a->axis == SweepAxis::GainRatio && a->min < 0.0) {
            throw ConfigError("sweep: gain-ratio axis must be non-negative");
        }
    }
    if (x.axis == y.axis) {
        throw ConfigError("sweep: axes must be distinct");
    }
    // The finest modulation swept anywhere must still be resolved by the step.
    plan.validate(max_omega_of(*this));
}

std::vector<double> PhaseDiagram::boundary_at_cutoff(double cutoff) const {
    const int nx = static_cast<int>(x_values.size());
    const int ny = static_cast<int>(y_values.size());
    const double log_cut = std::log10(cutoff);
    std::vector<double> boundary(nx, std::numeric_limits<double>::quiet_NaN());
    // Breaking sets in from small sigma_r but from large gain ratio; scan
    // in the direction the instability grows.
    const bool from_top = (y_axis.axis == SweepAxis::SigmaRatio);
    for (int ix = 0; ix < nx; ++ix) {
        if (from_top) {
            for (int iy = ny - 1; iy >= 0; --iy) {
                const PhaseCell& c = at(ix, iy);
                if (c.non_finite || c.log10_max > log_cut) {
                    boundary[ix] = y_values[iy];
                    break;
                }
            }
        } else {
            for (int iy = 0; iy < ny; ++iy) {
                const PhaseCell& c = at(ix, iy);
                if (c.non_finite || c.log10_max > log_cut) {
                    boundary[ix] = y_values[iy];
                    break;
                }
            }
        }
    }
    return boundary;
}

PhaseDiagram run_sweep(const SweepSpec& spec, ExecMode mode, int workers) {
    spec.validate();

    PhaseDiagram diagram;
    diagram.x_axis = spec.x;
    diagram.y_axis = spec.y;
    diagram.x_values = linspace(spec.x.min, spec.x.max, spec.x.count);
    diagram.y_values = linspace(spec.y.min, spec.y.max, spec.y.count);
    diagram.divergence_cutoff = spec.plan.divergence_cutoff;
    diagram.cells.resize(static_cast<std::size_t>(spec.x.count) * spec.y.count);

    // The launch field depends only on the array geometry, which no sweep
    // axis touches, so every cell shares it.
    const FieldState initial = initial_gaussian_field(spec.base_config);

    const long total = static_cast<long>(diagram.cells.size());
    const int nx = spec.x.count;

#ifdef _OPENMP
    if (mode == ExecMode::Parallel) {
        const int n_threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
        for (long idx = 0; idx < total; ++idx) {
            const int ix = static_cast<int>(idx % nx);
            const int iy = static_cast<int>(idx / nx);
            diagram.cells[idx] = evaluate_cell(spec, initial, diagram.x_values[ix], diagram.y_values[iy]);
        }
        extract_boundary(diagram);
        return diagram;
    }
#else
    (void)mode;
    (void)workers;
#endif
    for (long idx = 0; idx < total; ++idx) {
        const int ix = static_cast<int>(idx % nx);
        const int iy = static_cast<int>(idx / nx);
        diagram.cells[idx] = evaluate_cell(spec, initial, diagram.x_values[ix], diagram.y_values[iy]);
    }

    extract_boundary(diagram);
    return diagram;
}

ValleyReport detect_valleys(const PhaseDiagram& diagram, double low_omega_floor,
                            int window, double prominence_rows) {
    const SweepAxis xa = diagram.x_axis.axis;
    if (xa != SweepAxis::OmegaRatio && xa != SweepAxis::InverseOmega) {
        throw ConfigError("detect_valleys: x axis must carry the modulation frequency");
    }
    if (diagram.y_axis.axis != SweepAxis::GainRatio) {
        throw ConfigError("detect_valleys: y axis must be the gain ratio r");
    }
    const int nx = static_cast<int>(diagram.x_values.size());
    if (nx < 64) {
        throw ConfigError("detect_valleys: need >= 64 columns");
    }

    const auto omega_of = [&](int ix) {
        return (xa == SweepAxis::OmegaRatio) ? diagram.x_values[ix] : 1.0 / diagram.x_values[ix];
    };

    // Columns in play: above the low-omega floor. Missing boundary values
    // (no breaking cell in the column) count as +inf for minima detection.
    std::vector<int> cols;
    for (int ix = 0; ix < nx; ++ix) {
        if (omega_of(ix) >= low_omega_floor) {
            cols.push_back(ix);
        }
    }
    if (cols.empty()) {
        throw ConfigError("detect_valleys: no columns above the low-omega floor");
    }
    int defined = 0;
    std::vector<double> r_star(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const double b = diagram.boundary_y[cols[i]];
        if (std::isnan(b)) {
            r_star[i] = std::numeric_limits<double>::infinity();
        } else {
            r_star[i] = b;
            ++defined;
        }
    }
    if (defined * 2 < static_cast<int>(cols.size())) {
        throw TooCoarseError("detect_valleys: boundary defined on fewer than half the columns");
    }

    const double dy = (diagram.y_axis.max - diagram.y_axis.min) /
                      static_cast<double>(diagram.y_axis.count - 1);
    // slack so that a rise of exactly prominence_rows grid rows qualifies
    const double prominence = prominence_rows * dy * (1.0 - 1e-9);
    const int n = static_cast<int>(cols.size());

    const auto prominent = [&](int i) {
        bool left_ok = false;
        for (int j = i - 1; j >= 0; --j) {
            if (r_star[j] < r_star[i]) {
                return false;
            }
            if (r_star[j] >= r_star[i] + prominence) {
                left_ok = true;
                break;
            }
        }
        if (!left_ok) {
            return false;
        }
        for (int j = i + 1; j < n; ++j) {
            if (r_star[j] < r_star[i]) {
                return false;
            }
            if (r_star[j] >= r_star[i] + prominence) {
                return true;
            }
        }
        return false;
    };

    std::vector<int> minima;
    for (int i = 0; i < n; ++i) {
        if (std::isinf(r_star[i])) {
            continue;
        }
        bool is_min = true;
        for (int j = std::max(0, i - window); j <= std::min(n - 1, i + window); ++j) {
            if (r_star[j] < r_star[i]) {
                is_min = false;
                break;
            }
        }
        if (is_min && prominent(i)) {
            minima.push_back(i);
        }
    }

    // Merge plateau runs of equal minima. A flat run is labelled by its
    // low-omega edge: the resonance tongues cut on sharply from below and
    // relax softly above, so the onset column is the stable position.
    std::vector<double> positions;
    for (std::size_t i = 0; i < minima.size();) {
        std::size_t j = i;
        while (j + 1 < minima.size() && minima[j + 1] - minima[j] <= window &&
               r_star[minima[j + 1]] == r_star[minima[i]]) {
            ++j;
        }
        double pos = omega_of(cols[minima[i]]);
        for (std::size_t m = i; m <= j; ++m) {
            pos = std::min(pos, omega_of(cols[minima[m]]));
        }
        positions.push_back(pos);
        i = j + 1;
    }

    std::sort(positions.begin(), positions.end(), std::greater<double>());

    ValleyReport report;
    report.positions = positions;
    if (!positions.empty()) {
        report.base_frequency = positions.front();
        report.inverse_ratios.reserve(positions.size());
        for (const double p : positions) {
            report.inverse_ratios.push_back(positions.front() / p);
        }
    }
    return report;
}

} // namespace zbwg
