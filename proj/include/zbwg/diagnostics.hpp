#pragma once

#include "zbwg/propagator.hpp"

#include <vector>

namespace zbwg {

enum class PhaseClass { PseudoPt, PtBreaking };
enum class SpreadVerdict { Localized, Spreading };

// Observables sampled along z. total_intensity is the ratio to the launch
// intensity E_tot0; positions and widths are in units of the guide spacing.
struct Trajectory {
    std::vector<double> z_samples;
    std::vector<double> center_of_mass;
    std::vector<double> total_intensity;
    std::vector<double> width;
    std::vector<double> participation_ratio;
    std::vector<double> sublattice_a; // sum over even guides of |a_n|^2
    std::vector<double> sublattice_b; // sum over odd guides of |a_n|^2
    Termination termination = Termination::Completed;
    double e_tot0 = 0.0;
    double max_intensity_ratio = 0.0; // step-level max from the propagation
};

// Observer that accumulates a Trajectory; use via propagate(..., recorder.observer()).
class TrajectoryRecorder {
public:
    void record(const FieldState& state);
    Observer observer();
    // Stamps the propagation outcome and hands the trajectory out.
    Trajectory take(const PropagationResult& result);

private:
    Trajectory traj_;
};

// Runs the plan on the config's initial Gaussian field and collects the
// trajectory in one call.
Trajectory run_trajectory(const LatticeConfig& config, const PropagationPlan& plan);

// Intensity-weighted mean position, units of a from the array center.
// Throws ZeroFieldError when the total intensity underflows.
double center_of_mass(const FieldState& state);
// Intensity-weighted RMS width about the center of mass, units of a.
double rms_width(const FieldState& state);

struct Classification {
    PhaseClass phase = PhaseClass::PseudoPt;
    double log10_max_intensity = 0.0;
};
// PT_BREAKING iff the trajectory's peak intensity ratio exceeds the cutoff.
Classification classify(const Trajectory& trajectory, double cutoff);

struct ZbEstimate {
    double frequency = 0.0;  // dominant angular frequency of the detrended series
    double bin_width = 0.0;  // angular resolution 2*pi / record length
    std::vector<double> envelope; // analytic-signal magnitude of the detrended series
};
// Hann-windowed DFT peak of the detrended series with parabolic refinement.
// Throws NoPeakError when the peak is below 3x the median spectral floor.
ZbEstimate zb_frequency(const std::vector<double>& z, const std::vector<double>& series);

struct LocalizationResult {
    SpreadVerdict verdict = SpreadVerdict::Spreading;
    double growth_rate = 0.0;    // width slope over the final half of the run
    double reference_rate = 0.0; // free-spread slope of the r = 0 run
};
// Width growth over the final half of the run, fitted by least squares.
double width_growth_rate(const Trajectory& trajectory);
// LOCALIZED when the fitted growth rate is below threshold times the
// free-spread rate of the matching r = 0 run. Requires a completed trajectory.
LocalizationResult localization_metric(const Trajectory& trajectory,
                                       double free_spread_rate,
                                       double threshold = 0.1);

} // namespace zbwg
