#include "qdecay/moshinsky.hpp"

#include <cmath>

#include "qdecay/errors.hpp"

namespace qdecay {

namespace {
const cplx kExpMiPi4(M_SQRT1_2, -M_SQRT1_2);  // e^{-i pi/4}
}

MoshinskyArg::MoshinskyArg(double r_, double a_, double t_, cplx kappa_)
    : r(r_), a(a_), t(t_), kappa(kappa_) {
    if (!(t_ > 0.0)) throw validation_error("MoshinskyArg: t must be > 0");
    y = kExpMiPi4 * std::sqrt(1.0 / (4.0 * t_)) * (cplx(r_ - a_) - 2.0 * kappa_ * t_);
}

cplx moshinsky_m(double r, double a, double t, cplx kappa, bool* overflow) {
    if (overflow) *overflow = false;
    if (!(t > 0.0)) throw validation_error("moshinsky_m: t must be > 0");
    const double rho = r - a;
    const cplx u = cplx(rho) - 2.0 * kappa * t;
    const double inv2rt = 0.5 / std::sqrt(t);
    const cplx iy = cplx(-kExpMiPi4.imag(), kExpMiPi4.real()) * (u * inv2rt);  // i y
    const cplx phase = std::exp(cplx(0.0, rho * rho / (4.0 * t)));

    if (iy.imag() >= 0.0) return 0.5 * phase * faddeeva_w(iy, overflow);

    // reflection regime: exponent re = gamma (rho - 2 v t) <= 0 here
    const cplx theta = cplx(0, 1) * (kappa * rho - kappa * kappa * t);
    return std::exp(theta) - 0.5 * phase * faddeeva_w(-iy, overflow);
}

} // namespace qdecay
