#pragma once

#include <complex>

namespace qdecay {

using cplx = std::complex<double>;

// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
//
// Region scheme: Maclaurin series for |z| <= 1.5; pole-corrected
// trapezoid/midpoint sums (Chiarella-Reichel) for 1.5 < |z| < 7.2;
// Gautschi continued fraction beyond. Relative accuracy <= 1e-13 for
// Im z >= 0 (measured worst ~1e-14).
//
// For Im z < 0 the reflection w(z) = 2 exp(-z^2) - w(-z) is used; where
// exp(-z^2) overflows (Im(z)^2 - Re(z)^2 > ~709) the result is invalid
// and *overflow is set instead of returning infinities.
cplx faddeeva_w(cplx z, bool* overflow = nullptr);

// Continued-fraction evaluation, valid for |z| >= 7.2 with depth from
// faddeeva_cf_depth. Exposed for the SIMD kernel and its tests.
cplx faddeeva_cf(cplx z, int depth);
int faddeeva_cf_depth(double abs2z);

} // namespace qdecay
