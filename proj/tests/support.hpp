#pragma once

// Test-side oracles, independent of the library's evaluation paths.

#include <cmath>
#include <complex>

#include "qdecay/oracle.hpp"

namespace qdecay::testing {

// w(z) through the Laplace-transform representation
//   w(z) = (i/pi) int_0^inf e^{-t^2/4} e^{izt} dt   (Im z >= 0),
// by adaptive quadrature; asymptotic Laurent series for large |z|;
// reflection below the axis. Slow but independent of the region-split
// production code.
inline cplx w_oracle(cplx z) {
    if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - w_oracle(-z);
    const double a2 = std::norm(z);
    if (a2 >= 900.0) {
        // w ~ (i/sqrt(pi)) sum_m (2m-1)!!/(2^m) z^{-(2m+1)}
        const cplx inv2 = 1.0 / (z * z);
        cplx term = 1.0 / z;
        cplx s = term;
        double dfac = 1.0;
        for (int m = 1; m <= 12; ++m) {
            dfac *= (2 * m - 1) * 0.5;
            term *= inv2;
            s += dfac * term;
        }
        return cplx(0, 1.0 / std::sqrt(M_PI)) * s;
    }
    const cplx val = adaptive_integral(
        [z](double t) { return std::exp(cplx(-t * t / 4.0, 0.0) + cplx(0, 1) * z * t); }, 0.0,
        60.0, 1e-14);
    return cplx(0, 1.0 / M_PI) * val;
}

inline double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::abs(want);
}

// deterministic LCG so test samples are reproducible across platforms
struct Rng {
    unsigned long long s = 0x9e3779b97f4a7c15ull;
    explicit Rng(unsigned long long seed) : s(seed) {}
    double uniform() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return double((s >> 11) & ((1ull << 53) - 1)) / double(1ull << 53);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace qdecay::testing
