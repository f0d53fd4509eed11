#include "zbwg/dirac.hpp"

#include "zbwg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zbwg {

void DiracParams::validate() const {
    if (!(kappa > 0.0)) {
        throw ConfigError("dirac: kappa must be > 0");
    }
    if (!(sigma_r >= 0.0) || !(sigma_i_amp >= 0.0) || !(omega >= 0.0)) {
        throw ConfigError("dirac: sigma_r, sigma_i_amp and omega must be >= 0");
    }
}

DiracMapping map_lattice_to_dirac(const LatticeConfig& config) {
    config.validate();
    DiracMapping m;
    m.params.kappa = 1.0;
    m.params.sigma_r = config.sigma_r;
    m.params.sigma_i_amp = config.gain_ratio_r * config.sigma_r;
    m.params.omega = config.omega;
    m.kappa_physical = config.kappa;
    m.sigma_r_physical = config.sigma_r * config.kappa;
    m.envelope_width = config.spot_in_cells();
    return m;
}

SpinorField spinor_components(const FieldState& state) {
    const int n = static_cast<int>(state.amplitudes.size());
    const int cells = n / 2;
    SpinorField f;
    f.psi1.resize(cells);
    f.psi2.resize(cells);
    for (int m = 0; m < cells; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        f.psi1[m] = sign * state.amplitudes[2 * m];
        const cplx b = (2 * m >= 1) ? state.amplitudes[2 * m - 1] : cplx(0.0, 0.0);
        f.psi2[m] = cplx(0.0, sign) * b;
    }
    return f;
}

double SpectralGrid::norm_check() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < k_nodes.size(); ++i) {
        sum += 4.0 * M_PI * weights[i] * g_values[i] * g_values[i];
    }
    return sum;
}

SpectralGrid make_spectral_grid(double envelope_width_cells, int n_nodes) {
    if (!(envelope_width_cells > 0.0)) {
        throw ConfigError("spectral grid: envelope width must be > 0");
    }
    if (n_nodes < 8) {
        throw ConfigError("spectral grid: need at least 8 nodes");
    }
    SpectralGrid g;
    g.width = envelope_width_cells;
    // Truncate where the spectrum has dropped below 1e-8 of its peak.
    g.k_max = std::sqrt(2.0 * std::log(1e8)) / envelope_width_cells;

    const GaussLegendre rule = gauss_legendre(n_nodes);
    g.k_nodes.resize(n_nodes);
    g.weights.resize(n_nodes);
    g.g_values.resize(n_nodes);
    g.g_derivs.resize(n_nodes);
    double raw_norm = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const double k = g.k_max * rule.nodes[i];
        const double w = g.k_max * rule.weights[i];
        const double shape = std::exp(-0.5 * k * k * envelope_width_cells * envelope_width_cells);
        g.k_nodes[i] = k;
        g.weights[i] = w;
        g.g_values[i] = shape;
        raw_norm += 4.0 * M_PI * w * shape * shape;
    }
    // Normalize so that |psi(0)|^2 = sum(4 pi w G^2) = 1 on this grid.
    const double c = 1.0 / std::sqrt(raw_norm);
    for (int i = 0; i < n_nodes; ++i) {
        g.g_values[i] *= c;
        g.g_derivs[i] = -g.k_nodes[i] * envelope_width_cells * envelope_width_cells * g.g_values[i];
    }
    return g;
}

namespace {

// (cos(omega t) - 1)/omega with the removable omega -> 0 limit.
double cos_decay(double omega, double t) {
    const double x = omega * t;
    if (std::abs(x) < 1e-4) {
        return -0.5 * omega * t * t * (1.0 - x * x / 12.0);
    }
    return (std::cos(x) - 1.0) / omega;
}

struct EulerTerms {
    cplx a;     // A(t), continuous branch
    cplx b;     // B(t) = -sigma_r t + i sigma_i (cos(omega t)-1)/omega
    double ckt; // kappa k t
};

EulerTerms euler_terms(const DiracParams& p, double k, double t) {
    EulerTerms e;
    e.ckt = p.kappa * k * t;
    e.b = cplx(-p.sigma_r * t, p.sigma_i_amp * cos_decay(p.omega, t));
    if (p.sigma_i_amp == 0.0) {
        e.a = cplx(std::hypot(e.ckt, p.sigma_r * t), 0.0);
    } else {
        const cplx ib(-e.b.imag(), e.b.real());
        e.a = std::sqrt(cplx(e.ckt, 0.0) + ib) * std::sqrt(cplx(e.ckt, 0.0) - ib);
    }
    return e;
}

cplx sinc_c(const cplx& a) {
    if (std::abs(a) < 1e-4) {
        return 1.0 - a * a / 6.0;
    }
    return std::sin(a) / a;
}

struct TimeSample {
    cplx drift;
    cplx zb;
    cplx im;
    double psi = 0.0;
    cplx kernel;
};

TimeSample eval_time_sample(const DiracParams& p, const SpectralGrid& g, double t) {
    const std::size_t n = g.k_nodes.size();
    const double kappa3 = p.kappa * p.kappa * p.kappa;
    const double sig_decay = p.sigma_i_amp * cos_decay(p.omega, t);
    const double mass_t = p.sigma_r * t;

    cplx drift_sum(0.0, 0.0);
    cplx zb_sum(0.0, 0.0);
    double im_sum = 0.0;
    double psi_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double k = g.k_nodes[i];
        const double w = g.weights[i];
        const double g2 = g.g_values[i] * g.g_values[i];
        const EulerTerms e = euler_terms(p, k, t);
        const cplx a2 = e.a * e.a;
        const cplx cos_a = std::cos(e.a);
        const cplx sinc_a = sinc_c(e.a);
        const double abs_cos2 = std::norm(cos_a);
        const double abs_sinc2 = std::norm(sinc_a);

        // [|cos A|^2 A* + |sin A|^2 A] / (A |A|^2) == |cos A|^2 / A^2 + |sin A / A|^2.
        // A vanishes only where the k^2 prefactor does, so the guarded term drops out.
        const cplx drift_kernel = (a2 != cplx(0.0, 0.0)) ? abs_cos2 / a2 + abs_sinc2
                                                         : cplx(abs_sinc2, 0.0);
        drift_sum += (w * g2 * k * k) * drift_kernel;

        // sin(A) cos*(A) B^2 / A^3 == sinc(A) cos*(A) * (B^2 / A^2); at k = 0
        // A^2 = B^2 exactly, so the ratio is 1 there.
        const cplx ratio = (a2 != cplx(0.0, 0.0)) ? e.b * e.b / a2 : cplx(1.0, 0.0);
        zb_sum += (w * g2) * sinc_a * std::conj(cos_a) * ratio;

        im_sum += w * g.g_values[i] * g.g_derivs[i] * k * std::imag(sinc_a * std::conj(cos_a));

        psi_sum += w * g2 * (abs_cos2 + abs_sinc2 * (e.ckt * e.ckt + mass_t * mass_t +
                                                     sig_decay * sig_decay));
    }

    TimeSample out;
    out.drift = (4.0 * M_PI * kappa3 * t * t * t) * drift_sum;
    out.zb = (4.0 * M_PI * p.kappa * t) * zb_sum;
    out.im = cplx(0.0, 8.0 * M_PI * p.kappa * t * im_sum);
    out.psi = 4.0 * M_PI * psi_sum;

    const EulerTerms e0 = euler_terms(p, 0.0, t);
    out.kernel = std::sin(e0.a) * std::conj(std::cos(e0.a));
    return out;
}

void eval_prediction(const DiracParams& p, const SpectralGrid& g,
                     const std::vector<double>& times, bool parallel,
                     DiracPrediction& pred) {
    const long nt = static_cast<long>(times.size());
    pred.t = times;
    pred.xi_drift.resize(nt);
    pred.xi_zb.resize(nt);
    pred.xi_im.resize(nt);
    pred.psi_norm_sq.resize(nt);
    pred.xi_expectation.resize(nt);
    pred.zb_kernel.resize(nt);

    const auto fill = [&](long j) {
        const TimeSample s = eval_time_sample(p, g, times[j]);
        pred.xi_drift[j] = s.drift;
        pred.xi_zb[j] = s.zb;
        pred.xi_im[j] = s.im;
        pred.psi_norm_sq[j] = s.psi;
        pred.xi_expectation[j] = ((s.drift + s.zb + s.im) / s.psi).real();
        pred.zb_kernel[j] = s.kernel;
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long j = 0; j < nt; ++j) {
            fill(j);
        }
    } else {
        for (long j = 0; j < nt; ++j) {
            fill(j);
        }
    }
}

double sup_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    }
    return (diff == 0.0) ? 0.0 : diff / std::max(scale, 1e-300);
}

double sup_rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    }
    return (diff == 0.0) ? 0.0 : diff / std::max(scale, 1e-300);
}

} // namespace

cplx a_of_t(const DiracParams& params, double k, double t) {
    return euler_terms(params, k, t).a;
}

std::vector<SpinorPair> spinor_evolution(const DiracParams& params,
                                         const SpectralGrid& grid, double t) {
    params.validate();
    std::vector<SpinorPair> out(grid.k_nodes.size());
    for (std::size_t i = 0; i < grid.k_nodes.size(); ++i) {
        const EulerTerms e = euler_terms(params, grid.k_nodes[i], t);
        const cplx cos_a = std::cos(e.a);
        const cplx sinc_a = sinc_c(e.a);
        const double g = grid.g_values[i];
        out[i].psi1 = g * (cos_a + cplx(0.0, 1.0) * sinc_a * (-e.ckt + e.b));
        out[i].psi2 = g * (cos_a + cplx(0.0, 1.0) * sinc_a * (-e.ckt - e.b));
    }
    return out;
}

DiracPrediction prediction(const DiracParams& params, const SpectralGrid& grid,
                           const std::vector<double>& times,
                           const PredictionOptions& options) {
    params.validate();
    if (times.empty()) {
        throw ConfigError("prediction: need at least one time sample");
    }
    if (grid.k_nodes.empty()) {
        throw ConfigError("prediction: empty spectral grid");
    }

    DiracPrediction pred;
    eval_prediction(params, grid, times, options.parallel, pred);

    if (options.check_quadrature) {
        const SpectralGrid doubled =
            make_spectral_grid(grid.width, 2 * static_cast<int>(grid.k_nodes.size()));
        DiracPrediction fine;
        eval_prediction(params, doubled, times, options.parallel, fine);
        const struct {
            const char* name;
            double rel;
        } checks[] = {
            {"xi_drift", sup_rel_diff(pred.xi_drift, fine.xi_drift)},
            {"xi_zb", sup_rel_diff(pred.xi_zb, fine.xi_zb)},
            {"xi_im", sup_rel_diff(pred.xi_im, fine.xi_im)},
            {"psi_norm_sq", sup_rel_diff(pred.psi_norm_sq, fine.psi_norm_sq)},
            {"xi_expectation", sup_rel_diff(pred.xi_expectation, fine.xi_expectation)},
        };
        for (const auto& c : checks) {
            if (c.rel > options.stability_tol) {
                throw QuadratureError(std::string("prediction: doubling the k-grid moves ") +
                                      c.name + " by " + std::to_string(c.rel) +
                                      " relative; increase k_nodes");
            }
        }
    }
    return pred;
}

} // namespace zbwg
