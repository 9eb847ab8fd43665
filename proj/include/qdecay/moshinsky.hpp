#pragma once

#include "qdecay/faddeeva.hpp"

namespace qdecay {

// Argument of the propagation kernel:
//   y = e^{-i pi/4} (1/(4t))^{1/2} [(r - a) - 2 kappa t],   t > 0.
struct MoshinskyArg {
    cplx y;
    double r, a, t;
    cplx kappa;

    MoshinskyArg(double r_, double a_, double t_, cplx kappa_);
};

// M(y) = 1/2 e^{i (r-a)^2 / 4t} w(iy).
//
// When Im(iy) < 0 (the pole-dominated regime) the reflection of w is
// folded in analytically,
//   M = e^{i kappa (r-a) - i kappa^2 t} - 1/2 e^{i (r-a)^2/4t} w(-iy),
// whose combined exponent has non-positive real part there, so nothing
// overflows even with |kappa^2 t| ~ 1e10. Callers handle t = 0 via the
// closed-form initial state.
cplx moshinsky_m(double r, double a, double t, cplx kappa, bool* overflow = nullptr);

} // namespace qdecay
