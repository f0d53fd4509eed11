#include "zbwg/propagator.hpp"

#include "zbwg/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace zbwg {

void PropagationPlan::validate(double omega) const {
    if (!(step > 0.0) || !(step <= z_max)) {
        throw ConfigError("plan: need 0 < step <= z_max");
    }
    if (sample_every < 1) {
        throw ConfigError("plan: sample_every must be >= 1");
    }
    if (!(divergence_cutoff > 0.0)) {
        throw ConfigError("plan: divergence_cutoff must be > 0");
    }
    if (omega > 0.0 && step > (2.0 * M_PI / omega) / 20.0) {
        throw ConfigError("plan: step " + std::to_string(step) +
                          " does not resolve the modulation period 2pi/omega; need step <= " +
                          std::to_string((2.0 * M_PI / omega) / 20.0));
    }
}

namespace {

void rhs(const LatticeConfig& config, double z, const std::vector<cplx>& a, std::vector<cplx>& out) {
    const int n = static_cast<int>(a.size());
    const cplx i_sigma = cplx(0.0, 1.0) * sigma_at(config, z);
    for (int j = 0; j < n; ++j) {
        const cplx nb = (j > 0 ? a[j - 1] : cplx(0.0, 0.0)) + (j + 1 < n ? a[j + 1] : cplx(0.0, 0.0));
        const cplx diag = (j % 2 == 0) ? -i_sigma * a[j] : i_sigma * a[j];
        out[j] = cplx(-nb.imag(), nb.real()) + diag;
    }
}

double intensity_of(const std::vector<cplx>& a) {
    double sum = 0.0;
    for (const cplx& v : a) {
        sum += std::norm(v);
    }
    return sum;
}

} // namespace

PropagationResult propagate(const LatticeConfig& config, const PropagationPlan& plan,
                            const FieldState& initial, const Observer& observer) {
    config.validate();
    plan.validate(config.omega);
    if (static_cast<int>(initial.amplitudes.size()) != config.n_guides) {
        throw ConfigError("initial state size does not match n_guides");
    }

    const int n = config.n_guides;
    std::vector<cplx> a = initial.amplitudes;
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);

    const double e0 = intensity_of(a);
    const double z0 = initial.z;

    PropagationResult result;
    result.max_intensity_ratio = (e0 > 0.0) ? 1.0 : 0.0;

    if (observer) {
        observer(FieldState{z0, a});
    }

    const long full_steps = static_cast<long>(std::floor(plan.z_max / plan.step + 1e-9));
    const double remainder = plan.z_max - static_cast<double>(full_steps) * plan.step;
    const long total_steps = full_steps + (remainder > 1e-12 ? 1 : 0);

    double z_now = z0;
    bool sampled_last = false;
    for (long s = 0; s < total_steps; ++s) {
        const double h = (s < full_steps) ? plan.step : remainder;
        const double z_next = (s + 1 < total_steps) ? z0 + (s + 1) * plan.step : z0 + plan.z_max;

        rhs(config, z_now, a, k1);
        for (int j = 0; j < n; ++j) tmp[j] = a[j] + 0.5 * h * k1[j];
        rhs(config, z_now + 0.5 * h, tmp, k2);
        for (int j = 0; j < n; ++j) tmp[j] = a[j] + 0.5 * h * k2[j];
        rhs(config, z_now + 0.5 * h, tmp, k3);
        for (int j = 0; j < n; ++j) tmp[j] = a[j] + h * k3[j];
        rhs(config, z_now + h, tmp, k4);
        const double h6 = h / 6.0;
        for (int j = 0; j < n; ++j) {
            a[j] += h6 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
        }
        z_now = z_next;
        ++result.steps_taken;

        const double intensity = intensity_of(a);
        if (!std::isfinite(intensity)) {
            throw NonFiniteError("amplitude became non-finite at z = " + std::to_string(z_now) +
                                 "; reduce the integrator step");
        }
        const double ratio = (e0 > 0.0) ? intensity / e0 : 0.0;
        if (ratio > result.max_intensity_ratio) {
            result.max_intensity_ratio = ratio;
        }
        if (ratio > plan.divergence_cutoff) {
            result.termination = Termination::Diverged;
            if (observer) {
                observer(FieldState{z_now, a});
            }
            result.final_state = FieldState{z_now, std::move(a)};
            return result;
        }

        sampled_last = ((s + 1) % plan.sample_every == 0);
        if (sampled_last && observer) {
            observer(FieldState{z_now, a});
        }
    }

    if (!sampled_last && observer) {
        observer(FieldState{z_now, a});
    }
    result.termination = Termination::Completed;
    result.final_state = FieldState{z_now, std::move(a)};
    return result;
}

FieldState exact_propagator_const(const LatticeConfig& config, cplx sigma_const,
                                  double z, const FieldState& initial,
                                  double coupling) {
    const int n = static_cast<int>(initial.amplitudes.size());
    if (n != config.n_guides) {
        throw ConfigError("exact_propagator_const: state size does not match n_guides");
    }
    if (n > 512) {
        throw ConfigError("exact_propagator_const: dense decomposition limited to n_guides <= 512");
    }

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        h(j, j) = (j % 2 == 0) ? sigma_const : -sigma_const;
        if (j + 1 < n) {
            h(j, j + 1) = cplx(-coupling, 0.0);
            h(j + 1, j) = cplx(-coupling, 0.0);
        }
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw SingularError("exact_propagator_const: eigendecomposition failed to converge");
    }

    Eigen::VectorXcd v(n);
    for (int j = 0; j < n; ++j) {
        v(j) = initial.amplitudes[j];
    }
    const Eigen::VectorXcd coeffs = solver.eigenvectors().partialPivLu().solve(v);
    Eigen::VectorXcd evolved(n);
    for (int j = 0; j < n; ++j) {
        evolved(j) = std::exp(cplx(0.0, -1.0) * solver.eigenvalues()(j) * z) * coeffs(j);
    }
    const Eigen::VectorXcd out = solver.eigenvectors() * evolved;

    FieldState result;
    result.z = initial.z + z;
    result.amplitudes.resize(n);
    for (int j = 0; j < n; ++j) {
        result.amplitudes[j] = out(j);
    }
    return result;
}

} // namespace zbwg
