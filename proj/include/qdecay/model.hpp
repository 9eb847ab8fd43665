#pragma once

#include <array>
#include <string>

#include "qdecay/faddeeva.hpp"

namespace qdecay {

enum class PotentialKind { DeltaShell, DoubleBarrier };

// Delta shell: V(r) = lambda delta(r - a) on [0, inf), u(0) = 0.
// Double barrier: height V on [0,b] and [b+w, 2b+w] on the full line,
// outgoing waves e^{-ikx} (x < 0) and e^{+ikx} (x > L), L = 2b + w.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::DeltaShell;
    double lambda = 0.0;  // delta shell strength
    double a = 0.0;       // delta shell radius
    double V = 0.0;       // barrier height
    double b = 0.0;       // barrier width
    double w = 0.0;       // well width

    static PotentialSpec delta_shell(double lambda, double a);
    static PotentialSpec double_barrier(double V, double b, double w);

    double boundary() const;       // a, or L = 2b + w
    double strength_scale() const; // max(1, lambda or V), for residual tolerances
    std::string fingerprint() const;
    void validate() const;
};

// Normalized box mode: sqrt(2/(x1-x0)) sin(q pi (x-x0)/(x1-x0)) on [x0,x1].
struct InitialState {
    int q = 1;
    double x0 = 0.0, x1 = 0.0;

    static InitialState box_mode(int q, double x0, double x1);
    void validate(const PotentialSpec& spec) const;
};

double initial_state_value(const InitialState& state, double x);

// Analytic residual whose fourth-quadrant zeros are the resonance poles.
// Delta shell: exactly 2ik + lambda (e^{2ika} - 1).
// Double barrier: u'(L) - ik u(L) with u propagated from (1, -ik) at x=0
// (entire in k; built from cos(qd) and sin(qd)/q, q^2 = k^2 - V).
cplx pole_residual(const PotentialSpec& spec, cplx k);

// d residual / dk: analytic for the delta shell, complex-step otherwise.
cplx pole_residual_derivative(const PotentialSpec& spec, cplx k);

// Closed-form seed for the n-th pole. Delta shell (lambda a > 1):
//   (n pi/a)(1 - 1/(lambda a)) - i (1/a)(n pi/(lambda a))^2.
// Double barrier: sub-barrier well-mode estimate with an evanescent
// penetration correction; above-barrier seeds come from the grid scan
// in find_poles instead.
cplx pole_seed(const PotentialSpec& spec, int n);

// --- piecewise-constant propagation helpers (double barrier) ---

// Advance (u, u') across a region of width d with u'' = -q2 u,
// using cos(qd) and sin(qd)/q (entire in q2).
void prop_step(cplx& u, cplx& up, cplx q2, double d);

// closed form of int_0^d u(x)^2 dx for u = u0 cos(qx) + u0' sin(qx)/q
cplx segment_u2_integral(cplx u0, cplx up0, cplx q2, double d);

// (u, u') at the start of each region plus the two ends: x = 0, b, b+w, L.
// Start values (u, u') = (1, -ik).
std::array<std::array<cplx, 2>, 4> db_region_values(const PotentialSpec& spec, cplx k);

// Residual via explicit plane-wave amplitude matching at the four
// interfaces; equals pole_residual analytically (cross-check path).
cplx db_residual_interface_matching(const PotentialSpec& spec, cplx k);

} // namespace qdecay
