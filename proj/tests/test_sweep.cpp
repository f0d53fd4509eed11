#include "zbwg/sweep.hpp"

#include "zbwg/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace zbwg;

namespace {

SweepSpec desk_spec() {
    SweepSpec spec;
    spec.base_config.n_guides = 96;
    spec.base_config.sigma_r = 2.1;
    spec.base_config.spot_size = 105.0;
    spec.x = {SweepAxis::OmegaRatio, 0.2, 3.0, 8};
    spec.y = {SweepAxis::GainRatio, 0.0, 0.9, 8};
    spec.plan.z_max = 30.0;
    spec.plan.step = 0.02;
    spec.plan.sample_every = 50;
    spec.plan.divergence_cutoff = 1e6;
    return spec;
}

// Hand-built diagram with a boundary of known shape, for valley detection.
PhaseDiagram planted_diagram(int nx, int ny, const std::vector<double>& r_star) {
    PhaseDiagram d;
    d.x_axis = {SweepAxis::OmegaRatio, 0.4, 5.0, nx};
    d.y_axis = {SweepAxis::GainRatio, 0.0, 1.0, ny};
    d.divergence_cutoff = 1e9;
    for (int i = 0; i < nx; ++i) {
        d.x_values.push_back(0.4 + (5.0 - 0.4) * i / (nx - 1));
    }
    for (int j = 0; j < ny; ++j) {
        d.y_values.push_back(static_cast<double>(j) / (ny - 1));
    }
    d.cells.assign(static_cast<std::size_t>(nx) * ny, PhaseCell{});
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            PhaseCell& cell = d.cells[static_cast<std::size_t>(iy) * nx + ix];
            const bool breaking = d.y_values[iy] >= r_star[ix];
            cell.phase = breaking ? PhaseClass::PtBreaking : PhaseClass::PseudoPt;
            cell.log10_max = breaking ? 10.0 : 0.0;
        }
    }
    d.boundary_y = d.boundary_at_cutoff(d.divergence_cutoff);
    return d;
}

} // namespace

TEST_CASE("sweep spec validation") {
    SweepSpec spec = desk_spec();
    CHECK_NOTHROW(spec.validate());

    spec.x.axis = SweepAxis::GainRatio; // same as y
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    spec = desk_spec();
    spec.y.count = 4;
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    spec = desk_spec();
    spec.x.min = 2.0;
    spec.x.max = 1.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    spec = desk_spec();
    spec.x = {SweepAxis::InverseOmega, 0.0, 1.0, 8};
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    // a swept omega that the step cannot resolve
    spec = desk_spec();
    spec.x.max = 40.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("axis names round-trip") {
    for (SweepAxis a : {SweepAxis::GainRatio, SweepAxis::OmegaRatio, SweepAxis::SigmaRatio,
                        SweepAxis::InverseOmega}) {
        CHECK(axis_from_name(axis_name(a)) == a);
    }
    CHECK_THROWS_AS(axis_from_name("bogus"), ConfigError);
}

TEST_CASE("desk sweep: hermitian row stays pseudo-PT, slow strong gain breaks") {
    const SweepSpec spec = desk_spec();
    const PhaseDiagram d = run_sweep(spec, ExecMode::Parallel);

    REQUIRE(static_cast<int>(d.cells.size()) == 64);
    // r = 0 row (iy = 0) is Hermitian: never breaks
    for (int ix = 0; ix < 8; ++ix) {
        CHECK(d.at(ix, 0).phase == PhaseClass::PseudoPt);
        CHECK(std::abs(d.at(ix, 0).log10_max) < 0.05);
        CHECK_FALSE(d.at(ix, 0).non_finite);
    }
    // slowest column at the strongest gain: energy absorbed faster than it can rebalance
    CHECK(d.at(0, 7).phase == PhaseClass::PtBreaking);
}

TEST_CASE("classification splits the resonance from the plotted trembling case") {
    // r = 0.5 diverges on the rightmost valley (omega/omega0 = 4.2) but stays
    // quasi-stationary at omega/omega0 = 3.0
    LatticeConfig c;
    c.n_guides = 200;
    c.sigma_r = 2.1;
    c.gain_ratio_r = 0.5;
    PropagationPlan plan;
    plan.z_max = 120.0;
    plan.step = 0.02;
    plan.sample_every = 100;

    c.omega = 4.2;
    const Trajectory on_valley = run_trajectory(c, plan);
    CHECK(classify(on_valley, 1e9).phase == PhaseClass::PtBreaking);
    CHECK(on_valley.termination == Termination::Diverged);
    CHECK(on_valley.total_intensity.back() > 1e9);

    c.omega = 3.0;
    const Trajectory off_valley = run_trajectory(c, plan);
    CHECK(classify(off_valley, 1e9).phase == PhaseClass::PseudoPt);
    CHECK(off_valley.termination == Termination::Completed);
}

TEST_CASE("serial and parallel sweeps are bit-identical") {
    SweepSpec spec = desk_spec();
    spec.plan.z_max = 15.0;
    const PhaseDiagram serial = run_sweep(spec, ExecMode::Serial);
    const PhaseDiagram parallel = run_sweep(spec, ExecMode::Parallel, 2);

    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        CHECK(std::memcmp(&serial.cells[i].log10_max, &parallel.cells[i].log10_max,
                          sizeof(double)) == 0);
        CHECK(serial.cells[i].phase == parallel.cells[i].phase);
        CHECK(serial.cells[i].non_finite == parallel.cells[i].non_finite);
    }
}

TEST_CASE("boundary extraction finds the first breaking row per column") {
    std::vector<double> r_star(96);
    for (int i = 0; i < 96; ++i) {
        r_star[i] = 0.5;
    }
    r_star[40] = 0.2; // a single dip
    const PhaseDiagram d = planted_diagram(96, 64, r_star);
    for (int ix = 0; ix < 96; ++ix) {
        CHECK(d.boundary_y[ix] == doctest::Approx(r_star[ix] < 0.5 ? 0.2063 : 0.5079).epsilon(0.02));
    }
}

TEST_CASE("valley detection on a planted boundary") {
    // valleys at omega = 4.2, 1.5, 0.9, 0.6 over a smooth rising background
    const int nx = 128;
    std::vector<double> r_star(nx);
    PhaseDiagram d;
    std::vector<double> xs(nx);
    for (int i = 0; i < nx; ++i) {
        xs[i] = 0.4 + (5.0 - 0.4) * i / (nx - 1);
    }
    const std::vector<double> centers = {4.2, 1.5, 0.9, 0.6};
    for (int i = 0; i < nx; ++i) {
        double v = 0.45 + 0.05 * xs[i];
        for (const double c : centers) {
            v -= 0.3 * std::exp(-std::pow((xs[i] - c) / (0.08 * c), 2.0));
        }
        r_star[i] = std::max(0.05, v);
    }
    d = planted_diagram(nx, 256, r_star);

    const ValleyReport report = detect_valleys(d, 0.3);
    REQUIRE(report.positions.size() >= 4);
    CHECK(report.base_frequency == doctest::Approx(4.2).epsilon(0.05));
    for (std::size_t i = 0; i < centers.size(); ++i) {
        CHECK(report.positions[i] == doctest::Approx(centers[i]).epsilon(0.05));
    }
    CHECK(report.inverse_ratios[0] == 1.0);
    CHECK(report.inverse_ratios[1] == doctest::Approx(4.2 / 1.5).epsilon(0.05));
}

TEST_CASE("non-finite cells are flagged PT-breaking without aborting the sweep") {
    // a step far outside the RK4 stability region overflows every cell;
    // the huge cutoff keeps the divergence check from firing first
    SweepSpec spec;
    spec.base_config.n_guides = 16;
    spec.base_config.sigma_r = 2.1;
    spec.base_config.spot_size = 23.0;
    spec.base_config.omega0 = 1.0;
    spec.x = {SweepAxis::OmegaRatio, 0.001, 0.002, 8};
    spec.y = {SweepAxis::GainRatio, 0.0, 1.0, 8};
    spec.plan.z_max = 2000.0;
    spec.plan.step = 2.0;
    spec.plan.divergence_cutoff = 1e308;

    const PhaseDiagram d = run_sweep(spec, ExecMode::Serial);
    int flagged = 0;
    for (const PhaseCell& c : d.cells) {
        if (c.non_finite) {
            ++flagged;
            CHECK(c.phase == PhaseClass::PtBreaking);
        }
    }
    CHECK(flagged == static_cast<int>(d.cells.size()));
}

TEST_CASE("valley detection in the inverse-frequency plane") {
    // dips evenly spaced in 1/omega at odd multiples of the base period
    const int nx = 96;
    const double base = 4.2;
    PhaseDiagram d;
    d.x_axis = {SweepAxis::InverseOmega, 0.15, 1.9, nx};
    d.y_axis = {SweepAxis::GainRatio, 0.0, 1.0, 256};
    d.divergence_cutoff = 1e9;
    for (int i = 0; i < nx; ++i) {
        d.x_values.push_back(0.15 + (1.9 - 0.15) * i / (nx - 1));
    }
    for (int j = 0; j < 256; ++j) {
        d.y_values.push_back(static_cast<double>(j) / 255);
    }
    d.cells.assign(static_cast<std::size_t>(nx) * 256, PhaseCell{});
    for (int ix = 0; ix < nx; ++ix) {
        double r_star = 0.55;
        for (int mult : {1, 3, 5, 7}) {
            const double center = mult / base;
            r_star -= 0.35 * std::exp(-std::pow((d.x_values[ix] - center) / 0.05, 2.0));
        }
        for (int iy = 0; iy < 256; ++iy) {
            PhaseCell& cell = d.cells[static_cast<std::size_t>(iy) * nx + ix];
            const bool breaking = d.y_values[iy] >= r_star;
            cell.phase = breaking ? PhaseClass::PtBreaking : PhaseClass::PseudoPt;
            cell.log10_max = breaking ? 10.0 : 0.0;
        }
    }
    d.boundary_y = d.boundary_at_cutoff(d.divergence_cutoff);

    const ValleyReport report = detect_valleys(d, 0.3);
    REQUIRE(report.positions.size() == 4);
    CHECK(report.base_frequency == doctest::Approx(4.2).epsilon(0.05));
    const double expected[4] = {4.2, 1.4, 0.84, 0.6};
    for (int i = 0; i < 4; ++i) {
        CHECK(report.positions[i] == doctest::Approx(expected[i]).epsilon(0.06));
        CHECK(report.inverse_ratios[i] ==
              doctest::Approx(2.0 * static_cast<double>(i) + 1.0).epsilon(0.06));
    }
}

TEST_CASE("valley detection prerequisites") {
    std::vector<double> r_star(96, 0.5);
    PhaseDiagram d = planted_diagram(96, 64, r_star);

    d.x_axis.axis = SweepAxis::SigmaRatio;
    CHECK_THROWS_AS(detect_valleys(d, 0.3), ConfigError);

    d = planted_diagram(96, 64, r_star);
    PhaseDiagram narrow = d;
    narrow.x_values.resize(32);
    narrow.boundary_y.resize(32);
    CHECK_THROWS_AS(detect_valleys(narrow, 0.3), ConfigError);

    // boundary mostly missing: too coarse
    for (int ix = 0; ix < 96; ++ix) {
        if (ix % 3 != 0) {
            d.boundary_y[ix] = std::nan("");
        }
    }
    CHECK_THROWS_AS(detect_valleys(d, 0.3), TooCoarseError);
}
