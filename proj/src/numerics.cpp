#include "zbwg/numerics.hpp"

#include "zbwg/errors.hpp"

#include <cmath>
#include <cstddef>

namespace zbwg {

GaussLegendre gauss_legendre(int n) {
    if (n < 1) {
        throw ConfigError("gauss_legendre: node count must be >= 1");
    }
    GaussLegendre rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th root of P_n, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}.
            double p0 = 1.0;
            double p1 = x;
            for (int j = 1; j < n; ++j) {
                const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Mirror so that the rule is symmetric to the last bit.
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

void fft_inplace(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ConfigError("fft_inplace: length must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = data[i + j];
                const cplx v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& z : data) {
            z /= static_cast<double>(n);
        }
    }
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ConfigError("linear_fit: need two equally sized series with >= 2 points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LinearFit fit;
    if (denom != 0.0) {
        fit.slope = (n * sxy - sx * sy) / denom;
    }
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

std::vector<double> detrend(const std::vector<double>& x, const std::vector<double>& y) {
    const LinearFit fit = linear_fit(x, y);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    }
    return out;
}

std::vector<double> analytic_envelope(const std::vector<double>& series) {
    const std::size_t m = series.size();
    if (m < 4) {
        throw ConfigError("analytic_envelope: series too short");
    }
    const std::size_t n = next_pow2(m);
    std::vector<cplx> buf(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        buf[i] = cplx(series[i], 0.0);
    }
    fft_inplace(buf, false);
    // Keep DC and Nyquist, double the positive frequencies, zero the rest.
    for (std::size_t k = 1; k < n / 2; ++k) {
        buf[k] *= 2.0;
    }
    for (std::size_t k = n / 2 + 1; k < n; ++k) {
        buf[k] = cplx(0.0, 0.0);
    }
    fft_inplace(buf, true);
    std::vector<double> env(m);
    for (std::size_t i = 0; i < m; ++i) {
        env[i] = std::abs(buf[i]);
    }
    return env;
}

} // namespace zbwg
