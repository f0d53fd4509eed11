#pragma once

#include <complex>
#include <vector>

namespace zbwg {

using cplx = std::complex<double>;

// Gauss-Legendre rule on [-1, 1]. Nodes are exactly symmetric about 0
// (the negative half is mirrored from the positive half).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

// In-place radix-2 FFT. data.size() must be a power of two.
// Forward transform uses exp(-2*pi*i*j*k/N); inverse divides by N.
void fft_inplace(std::vector<cplx>& data, bool inverse);

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Subtracts the least-squares line from y.
std::vector<double> detrend(const std::vector<double>& x, const std::vector<double>& y);

// Magnitude of the analytic signal (FFT-based Hilbert transform).
std::vector<double> analytic_envelope(const std::vector<double>& series);

} // namespace zbwg
