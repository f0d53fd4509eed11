#include "zbwg/diagnostics.hpp"

#include "zbwg/errors.hpp"
#include "zbwg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zbwg {

namespace {

double guide_position(int j, int n_guides) {
    return static_cast<double>(j - n_guides / 2);
}

} // namespace

void TrajectoryRecorder::record(const FieldState& state) {
    const int n = static_cast<int>(state.amplitudes.size());
    double total = 0.0;
    double first_moment = 0.0;
    double fourth = 0.0;
    double even_sum = 0.0;
    double odd_sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double inten = std::norm(state.amplitudes[j]);
        total += inten;
        first_moment += guide_position(j, n) * inten;
        fourth += inten * inten;
        if (j % 2 == 0) {
            even_sum += inten;
        } else {
            odd_sum += inten;
        }
    }
    if (traj_.z_samples.empty()) {
        traj_.e_tot0 = total;
    }

    double com = 0.0;
    double width = 0.0;
    double pr = 0.0;
    if (total > 0.0) {
        com = first_moment / total;
        double second = 0.0;
        for (int j = 0; j < n; ++j) {
            const double dx = guide_position(j, n) - com;
            second += dx * dx * std::norm(state.amplitudes[j]);
        }
        width = std::sqrt(second / total);
        pr = (fourth > 0.0) ? total * total / fourth : 0.0;
    }

    traj_.z_samples.push_back(state.z);
    traj_.center_of_mass.push_back(com);
    traj_.total_intensity.push_back(traj_.e_tot0 > 0.0 ? total / traj_.e_tot0 : 0.0);
    traj_.width.push_back(width);
    traj_.participation_ratio.push_back(pr);
    traj_.sublattice_a.push_back(even_sum);
    traj_.sublattice_b.push_back(odd_sum);
}

Observer TrajectoryRecorder::observer() {
    return [this](const FieldState& state) { record(state); };
}

Trajectory TrajectoryRecorder::take(const PropagationResult& result) {
    traj_.termination = result.termination;
    traj_.max_intensity_ratio = result.max_intensity_ratio;
    return std::move(traj_);
}

Trajectory run_trajectory(const LatticeConfig& config, const PropagationPlan& plan) {
    const FieldState initial = initial_gaussian_field(config);
    TrajectoryRecorder recorder;
    const PropagationResult result = propagate(config, plan, initial, recorder.observer());
    return recorder.take(result);
}

double center_of_mass(const FieldState& state) {
    const int n = static_cast<int>(state.amplitudes.size());
    double total = 0.0;
    double first = 0.0;
    for (int j = 0; j < n; ++j) {
        const double inten = std::norm(state.amplitudes[j]);
        total += inten;
        first += guide_position(j, n) * inten;
    }
    if (!(total > 0.0)) {
        throw ZeroFieldError("center_of_mass: total intensity underflowed");
    }
    return first / total;
}

double rms_width(const FieldState& state) {
    const int n = static_cast<int>(state.amplitudes.size());
    const double com = center_of_mass(state);
    double total = 0.0;
    double second = 0.0;
    for (int j = 0; j < n; ++j) {
        const double inten = std::norm(state.amplitudes[j]);
        const double dx = guide_position(j, n) - com;
        total += inten;
        second += dx * dx * inten;
    }
    return std::sqrt(second / total);
}

Classification classify(const Trajectory& trajectory, double cutoff) {
    double peak = 0.0;
    for (const double v : trajectory.total_intensity) {
        peak = std::max(peak, v);
    }
    Classification c;
    c.phase = (peak > cutoff) ? PhaseClass::PtBreaking : PhaseClass::PseudoPt;
    c.log10_max_intensity = std::log10(std::max(peak, 1e-300));
    return c;
}

ZbEstimate zb_frequency(const std::vector<double>& z, const std::vector<double>& series) {
    if (z.size() != series.size() || z.size() < 16) {
        throw ConfigError("zb_frequency: need matching series with >= 16 samples");
    }
    const std::size_t m = z.size();
    const double dz = (z.back() - z.front()) / static_cast<double>(m - 1);
    if (!(dz > 0.0)) {
        throw ConfigError("zb_frequency: z samples must be increasing");
    }

    const std::vector<double> flat = detrend(z, series);
    double flat_scale = 0.0;
    double series_scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        flat_scale = std::max(flat_scale, std::abs(flat[j]));
        series_scale = std::max(series_scale, std::abs(series[j]));
    }
    if (flat_scale <= 1e-12 * std::max(series_scale, 1.0)) {
        throw NoPeakError("zb_frequency: series carries no oscillation beyond roundoff");
    }

    // Hann window, zero-padded transform for a finer peak read-out.
    const std::size_t padded = next_pow2(4 * m);
    std::vector<cplx> buf(padded, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < m; ++j) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * j / static_cast<double>(m - 1)));
        buf[j] = cplx(flat[j] * w, 0.0);
    }
    fft_inplace(buf, false);

    const std::size_t half = padded / 2;
    std::vector<double> mag(half);
    for (std::size_t k = 1; k < half; ++k) {
        mag[k] = std::abs(buf[k]);
    }
    std::size_t peak = 1;
    for (std::size_t k = 2; k < half; ++k) {
        if (mag[k] > mag[peak]) {
            peak = k;
        }
    }
    std::vector<double> sorted(mag.begin() + 1, mag.end());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double floor = sorted[sorted.size() / 2];
    if (!(mag[peak] > 3.0 * floor) || mag[peak] <= 0.0) {
        throw NoPeakError("zb_frequency: no spectral peak above 3x the median floor");
    }

    // Parabolic refinement on the log magnitude around the peak bin.
    double shift = 0.0;
    if (peak + 1 < half && peak >= 2 && mag[peak - 1] > 0.0 && mag[peak + 1] > 0.0) {
        const double lm = std::log(mag[peak - 1]);
        const double lc = std::log(mag[peak]);
        const double lp = std::log(mag[peak + 1]);
        const double denom = lm - 2.0 * lc + lp;
        if (denom < 0.0) {
            shift = 0.5 * (lm - lp) / denom;
            shift = std::clamp(shift, -0.5, 0.5);
        }
    }

    ZbEstimate est;
    est.frequency = 2.0 * M_PI * (static_cast<double>(peak) + shift) /
                    (static_cast<double>(padded) * dz);
    est.bin_width = 2.0 * M_PI / (static_cast<double>(m) * dz);
    est.envelope = analytic_envelope(flat);
    return est;
}

double width_growth_rate(const Trajectory& trajectory) {
    const std::size_t m = trajectory.z_samples.size();
    if (m < 8) {
        throw ConfigError("width_growth_rate: trajectory too short");
    }
    const double z_mid = 0.5 * (trajectory.z_samples.front() + trajectory.z_samples.back());
    std::vector<double> zs, ws;
    for (std::size_t j = 0; j < m; ++j) {
        if (trajectory.z_samples[j] >= z_mid) {
            zs.push_back(trajectory.z_samples[j]);
            ws.push_back(trajectory.width[j]);
        }
    }
    return linear_fit(zs, ws).slope;
}

LocalizationResult localization_metric(const Trajectory& trajectory,
                                       double free_spread_rate,
                                       double threshold) {
    if (trajectory.termination != Termination::Completed) {
        throw ConfigError("localization_metric: trajectory must have completed without divergence");
    }
    if (!(free_spread_rate > 0.0)) {
        throw ConfigError("localization_metric: free-spread reference rate must be > 0");
    }
    LocalizationResult r;
    r.growth_rate = width_growth_rate(trajectory);
    r.reference_rate = free_spread_rate;
    r.verdict = (r.growth_rate < threshold * free_spread_rate) ? SpreadVerdict::Localized
                                                               : SpreadVerdict::Spreading;
    return r;
}

} // namespace zbwg
