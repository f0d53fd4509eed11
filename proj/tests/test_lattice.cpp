#include "zbwg/lattice.hpp"

#include "zbwg/errors.hpp"
#include "zbwg/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace zbwg;

namespace {

LatticeConfig reference_defaults() {
    LatticeConfig c;
    c.n_guides = 200;
    c.spacing_a = 16.0;
    c.kappa = 0.14;
    c.sigma_r = 2.1;
    c.gain_ratio_r = 0.0;
    c.omega = 3.0;
    c.omega0 = 1.0;
    c.spot_size = 105.0;
    return c;
}

} // namespace

TEST_CASE("config validation catches the documented invariants") {
    LatticeConfig c = reference_defaults();
    CHECK_NOTHROW(c.validate());

    c.n_guides = 201;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.n_guides = 2;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = reference_defaults();
    c.spot_size = 10.0; // below the guide spacing
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = reference_defaults();
    c.omega0 = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sigma_at reproduces the modulation profile") {
    LatticeConfig c = reference_defaults();
    c.gain_ratio_r = 0.5;
    c.omega = 1.0;

    CHECK(sigma_at(c, 0.0) == cplx(2.1, 0.0));
    const cplx quarter = sigma_at(c, M_PI / 2.0);
    CHECK(quarter.real() == doctest::Approx(2.1).epsilon(1e-15));
    CHECK(quarter.imag() == doctest::Approx(1.05).epsilon(1e-15));

    c.gain_ratio_r = 0.0;
    CHECK(sigma_at(c, 17.3).imag() == 0.0);
}

TEST_CASE("sigma_at is periodic in 2 pi / omega") {
    LatticeConfig c = reference_defaults();
    c.gain_ratio_r = 0.7;
    c.omega = 2.6;
    const double period = 2.0 * M_PI / c.omega;
    for (double z : {0.0, 0.31, 4.7, 11.0}) {
        const cplx a = sigma_at(c, z);
        const cplx b = sigma_at(c, z + period);
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("coupled_mode_rhs couples nearest neighbours only") {
    LatticeConfig c = reference_defaults();
    c.n_guides = 12;
    c.spot_size = 40.0; // keep validate() happy; field set manually below
    c.sigma_r = 0.0;

    FieldState s;
    s.z = 0.0;
    s.amplitudes.assign(12, cplx(0.0, 0.0));
    s.amplitudes[5] = cplx(1.0, 0.0);
    const auto rhs = coupled_mode_rhs(c, s);
    CHECK(rhs[4] == cplx(0.0, 1.0));
    CHECK(rhs[6] == cplx(0.0, 1.0));
    CHECK(rhs[5] == cplx(0.0, 0.0));
    for (int j : {0, 1, 2, 3, 7, 8, 9, 10, 11}) {
        CHECK(rhs[j] == cplx(0.0, 0.0));
    }
}

TEST_CASE("coupled_mode_rhs handles the uniform state and the parity sign") {
    LatticeConfig c = reference_defaults();
    c.n_guides = 12;
    c.spot_size = 40.0;
    c.sigma_r = 0.0;

    FieldState uniform;
    uniform.amplitudes.assign(12, cplx(1.0, 0.0));
    const auto rhs = coupled_mode_rhs(c, uniform);
    for (int j = 1; j < 11; ++j) {
        CHECK(std::abs(rhs[j] - cplx(0.0, 2.0)) < 1e-15);
    }

    c.sigma_r = 2.1;
    FieldState first;
    first.amplitudes.assign(12, cplx(0.0, 0.0));
    first.amplitudes[0] = cplx(1.0, 0.0);
    const auto rhs2 = coupled_mode_rhs(c, first);
    // guide 0 is an A guide: -i * sigma * a_0
    CHECK(std::abs(rhs2[0] - cplx(0.0, -2.1)) < 1e-15);
}

TEST_CASE("coupled_mode_rhs is linear in the state") {
    LatticeConfig c = reference_defaults();
    c.n_guides = 16;
    c.spot_size = 40.0;
    c.gain_ratio_r = 0.5;
    c.omega = 2.0;

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FieldState u, v;
    u.z = v.z = 0.7;
    for (int j = 0; j < 16; ++j) {
        u.amplitudes.emplace_back(dist(rng), dist(rng));
        v.amplitudes.emplace_back(dist(rng), dist(rng));
    }
    const cplx alpha(0.8, -0.4);
    const cplx beta(-1.2, 0.3);

    FieldState combo;
    combo.z = u.z;
    for (int j = 0; j < 16; ++j) {
        combo.amplitudes.push_back(alpha * u.amplitudes[j] + beta * v.amplitudes[j]);
    }
    const auto ru = coupled_mode_rhs(c, u);
    const auto rv = coupled_mode_rhs(c, v);
    const auto rc = coupled_mode_rhs(c, combo);
    for (int j = 0; j < 16; ++j) {
        CHECK(std::abs(rc[j] - (alpha * ru[j] + beta * rv[j])) < 1e-14);
    }
}

TEST_CASE("for r = 0 the rhs equals -iH a with H real symmetric") {
    LatticeConfig c = reference_defaults();
    c.n_guides = 16;
    c.spot_size = 40.0;
    c.sigma_r = 1.7;

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FieldState s;
    s.z = 2.5;
    for (int j = 0; j < 16; ++j) {
        s.amplitudes.emplace_back(dist(rng), dist(rng));
    }

    const auto rhs = coupled_mode_rhs(c, s);
    for (int j = 0; j < 16; ++j) {
        cplx h_row(0.0, 0.0);
        if (j > 0) h_row += -1.0 * s.amplitudes[j - 1];
        if (j < 15) h_row += -1.0 * s.amplitudes[j + 1];
        h_row += ((j % 2 == 0) ? 1.7 : -1.7) * s.amplitudes[j];
        const cplx expected = cplx(0.0, -1.0) * h_row;
        CHECK(std::abs(rhs[j] - expected) < 1e-14);
    }
}

TEST_CASE("initial field peaks at the center guide with a quarter-turn tilt") {
    const LatticeConfig c = reference_defaults();
    const FieldState s = initial_gaussian_field(c);

    REQUIRE(static_cast<int>(s.amplitudes.size()) == 200);
    CHECK(std::abs(s.amplitudes[100]) == doctest::Approx(1.0).epsilon(1e-15));

    for (int j = 40; j < 160; ++j) {
        const cplx ratio = s.amplitudes[j + 1] / s.amplitudes[j];
        CHECK(std::arg(ratio) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("initial field total intensity matches direct summation") {
    const LatticeConfig c = reference_defaults();
    const FieldState s = initial_gaussian_field(c);
    const double w = c.spot_size / c.spacing_a;
    double expected = 0.0;
    for (int j = 0; j < c.n_guides; ++j) {
        const double x = static_cast<double>(j - 100);
        expected += std::exp(-x * x / (w * w));
    }
    CHECK(total_intensity(s) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("initial field spectrum peaks at the zone edge q = pi/(2a)") {
    LatticeConfig c = reference_defaults();
    c.n_guides = 256;
    const FieldState s = initial_gaussian_field(c);
    std::vector<cplx> buf = s.amplitudes;
    fft_inplace(buf, false);
    std::size_t peak = 0;
    for (std::size_t k = 1; k < buf.size(); ++k) {
        if (std::abs(buf[k]) > std::abs(buf[peak])) {
            peak = k;
        }
    }
    // bin 256/4 corresponds to a phase advance of pi/2 per guide
    CHECK(peak == 64);
}

TEST_CASE("initial field rejects envelopes leaking past the array edge") {
    LatticeConfig c = reference_defaults();
    c.n_guides = 16;
    CHECK_THROWS_AS(initial_gaussian_field(c), ConfigError);
}
