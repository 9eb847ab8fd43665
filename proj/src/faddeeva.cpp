#include "qdecay/faddeeva.hpp"

#include <array>
#include <cmath>

namespace qdecay {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kH = 0.34;          // quadrature step of the band scheme
constexpr int kNodes = 22;           // covers |t| <= 7.48, exp(-t^2) < 6e-25

struct BandTables {
    std::array<double, kNodes> tm2, wm;  // midpoint nodes (k+1/2)h
    std::array<double, kNodes> tt2, wt;  // trapezoid nodes k h, k >= 1
    BandTables() {
        for (int k = 0; k < kNodes; ++k) {
            double tm = (k + 0.5) * kH;
            double tt = (k + 1.0) * kH;
            tm2[k] = tm * tm;
            tt2[k] = tt * tt;
            wm[k] = std::exp(-tm * tm);
            wt[k] = std::exp(-tt * tt);
        }
    }
};
const BandTables tables;

// Maclaurin: w(z) = e^{-z^2} + i z sum_m (-z^2)^m / Gamma(m+3/2)
cplx w_series(cplx z) {
    const cplx z2 = z * z;
    const cplx mz2 = -z2;
    cplx s = 0.0;
    cplx t = 2.0 / kSqrtPi;
    for (int m = 0; m < 64; ++m) {
        s += t;
        t *= mz2 / (m + 1.5);
        if (std::abs(t) < 1e-17 * std::abs(s)) break;
    }
    return std::exp(-z2) + cplx(0, 1) * z * s;
}

// Trapezoid/midpoint sums over exp(-t^2)/(z - t), paired as 2z/(z^2-t^2),
// plus the residue correction 2 e^{-z^2} / (1 -+ e^{-2 pi i z / h}).
// Family picked so Re z stays >= h/4 away from the node grid in use.
cplx w_band(cplx z) {
    const double x = z.real();
    const double u = x / kH;
    const double d_trap = std::abs(u - std::round(u));
    const double d_mid = std::abs(u - (std::floor(u) + 0.5));
    const cplx z2 = z * z;
    const cplx ex = cplx(0, -2.0 * M_PI / kH) * z;

    cplx s = 0.0;
    bool mid = d_mid >= d_trap;
    if (mid) {
        for (int k = 0; k < kNodes; ++k)
            s += tables.wm[k] * 2.0 * z / (z2 - tables.tm2[k]);
    } else {
        s = 1.0 / z;
        for (int k = 0; k < kNodes; ++k)
            s += tables.wt[k] * 2.0 * z / (z2 - tables.tt2[k]);
    }
    s *= cplx(0, kH / M_PI);

    cplx corr;
    if (ex.real() > 40.0) {
        // 1/(1 +- e^ex) ~ +-e^{-ex}
        corr = (mid ? 2.0 : -2.0) * std::exp(-z2 - ex);
    } else {
        corr = 2.0 * std::exp(-z2) / (mid ? 1.0 + std::exp(ex) : 1.0 - std::exp(ex));
    }
    return s + corr;
}

// Im z >= 0, Re z >= 0
cplx w_quadrant(cplx z) {
    const double a2 = std::norm(z);
    if (a2 <= 2.25) return w_series(z);
    if (a2 < 51.84) return w_band(z);
    return faddeeva_cf(z, faddeeva_cf_depth(a2));
}

cplx w_upper(cplx z) {
    if (z.real() >= 0.0) return w_quadrant(z);
    return std::conj(w_quadrant(std::conj(-z)));  // w(-conj z) = conj w(z)
}

} // namespace

int faddeeva_cf_depth(double abs2z) {
    if (abs2z >= 2500.0) return 5;
    if (abs2z >= 900.0) return 6;
    if (abs2z >= 400.0) return 7;
    if (abs2z >= 225.0) return 9;
    if (abs2z >= 100.0) return 11;
    return 13;  // down to |z| = 7.2
}

cplx faddeeva_cf(cplx z, int depth) {
    cplx r = 0.0;
    for (int j = depth; j >= 1; --j) r = (0.5 * j) / (z - r);
    return cplx(0, 1.0 / kSqrtPi) / (z - r);
}

cplx faddeeva_w(cplx z, bool* overflow) {
    if (overflow) *overflow = false;
    if (z.imag() >= 0.0) return w_upper(z);
    // lower half: w(z) = 2 e^{-z^2} - w(-z); Re(-z^2) = y^2 - x^2 can overflow
    const double grow = z.imag() * z.imag() - z.real() * z.real();
    if (grow > 709.0) {
        if (overflow) *overflow = true;
        return cplx(0.0, 0.0);
    }
    return 2.0 * std::exp(-z * z) - w_upper(-z);
}

} // namespace qdecay
