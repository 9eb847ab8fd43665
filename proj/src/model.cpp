#include "qdecay/model.hpp"

#include <cmath>
#include <cstdio>

#include "qdecay/errors.hpp"

namespace qdecay {

PotentialSpec PotentialSpec::delta_shell(double lambda, double a) {
    PotentialSpec s;
    s.kind = PotentialKind::DeltaShell;
    s.lambda = lambda;
    s.a = a;
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::double_barrier(double V, double b, double w) {
    PotentialSpec s;
    s.kind = PotentialKind::DoubleBarrier;
    s.V = V;
    s.b = b;
    s.w = w;
    s.validate();
    return s;
}

void PotentialSpec::validate() const {
    if (kind == PotentialKind::DeltaShell) {
        if (!(lambda > 0.0) || !(a > 0.0))
            throw validation_error("delta shell requires lambda > 0 and a > 0");
    } else {
        if (!(V > 0.0) || !(b > 0.0) || !(w > 0.0))
            throw validation_error("double barrier requires V, b, w > 0");
    }
}

double PotentialSpec::boundary() const {
    return kind == PotentialKind::DeltaShell ? a : 2.0 * b + w;
}

double PotentialSpec::strength_scale() const {
    return std::max(1.0, kind == PotentialKind::DeltaShell ? lambda : V);
}

std::string PotentialSpec::fingerprint() const {
    char buf[160];
    if (kind == PotentialKind::DeltaShell)
        std::snprintf(buf, sizeof buf, "delta_shell;lambda=%.17g;a=%.17g", lambda, a);
    else
        std::snprintf(buf, sizeof buf, "double_barrier;V=%.17g;b=%.17g;w=%.17g", V, b, w);
    return buf;
}

InitialState InitialState::box_mode(int q, double x0, double x1) {
    if (q < 1) throw validation_error("box mode index q must be >= 1");
    if (!(x1 > x0)) throw validation_error("box mode support must be nonempty");
    return InitialState{q, x0, x1};
}

void InitialState::validate(const PotentialSpec& spec) const {
    if (q < 1) throw validation_error("box mode index q must be >= 1");
    if (x0 < -1e-12 || x1 > spec.boundary() + 1e-12)
        throw validation_error("initial state support must lie inside the confinement region");
}

double initial_state_value(const InitialState& s, double x) {
    if (x <= s.x0 || x >= s.x1) return 0.0;
    const double width = s.x1 - s.x0;
    return std::sqrt(2.0 / width) * std::sin(s.q * M_PI * (x - s.x0) / width);
}

void prop_step(cplx& u, cplx& up, cplx q2, double d) {
    const cplx q = std::sqrt(q2);
    cplx c, s;
    if (std::abs(q) * d > 1e-8) {
        c = std::cos(q * d);
        s = std::sin(q * d) / q;
    } else {
        c = 1.0 - q2 * (d * d) / 2.0;
        s = d * (1.0 - q2 * (d * d) / 6.0);
    }
    const cplx u_new = u * c + up * s;
    up = -q2 * u * s + up * c;
    u = u_new;
}

cplx segment_u2_integral(cplx u0, cplx up0, cplx q2, double d) {
    const cplx q = std::sqrt(q2);
    cplx f1, f2, f3;
    if (std::abs(q) * d > 1e-2) {
        const cplx s2 = std::sin(2.0 * q * d);
        const cplx sq = std::sin(q * d);
        f1 = 0.5 * d + s2 / (4.0 * q);
        f2 = (0.5 * d - s2 / (4.0 * q)) / q2;
        f3 = sq * sq / (2.0 * q2);
    } else {
        const double d2 = d * d;
        const cplx q4 = q2 * q2;
        f1 = d - q2 * (d * d2) / 3.0 + q4 * (d2 * d2 * d) / 15.0;
        f2 = (d * d2) / 3.0 - q2 * (d2 * d2 * d) / 15.0 + q4 * (d2 * d2 * d2 * d) / 157.5;
        f3 = d2 / 2.0 - q2 * (d2 * d2) / 6.0 + q4 * (d2 * d2 * d2) / 45.0;
    }
    return u0 * u0 * f1 + 2.0 * u0 * up0 * f3 + up0 * up0 * f2;
}

std::array<std::array<cplx, 2>, 4> db_region_values(const PotentialSpec& spec, cplx k) {
    const cplx k2 = k * k;
    cplx u = 1.0, up = cplx(0, -1) * k;
    std::array<std::array<cplx, 2>, 4> out;
    out[0] = {u, up};
    const cplx q2s[3] = {k2 - spec.V, k2, k2 - spec.V};
    const double ds[3] = {spec.b, spec.w, spec.b};
    for (int i = 0; i < 3; ++i) {
        prop_step(u, up, q2s[i], ds[i]);
        out[i + 1] = {u, up};
    }
    return out;
}

cplx pole_residual(const PotentialSpec& spec, cplx k) {
    if (spec.kind == PotentialKind::DeltaShell) {
        return cplx(0, 2) * k + spec.lambda * (std::exp(cplx(0, 2) * k * spec.a) - 1.0);
    }
    const auto v = db_region_values(spec, k);
    return v[3][1] - cplx(0, 1) * k * v[3][0];
}

cplx pole_residual_derivative(const PotentialSpec& spec, cplx k) {
    if (spec.kind == PotentialKind::DeltaShell) {
        return cplx(0, 2) + cplx(0, 2) * spec.a * spec.lambda * std::exp(cplx(0, 2) * k * spec.a);
    }
    // complex-step on an analytic function: central difference in a
    // direction-free sense; h scaled to |k|
    const double h = 1e-7 * std::max(1.0, std::abs(k));
    return (pole_residual(spec, k + h) - pole_residual(spec, k - h)) / (2.0 * h);
}

cplx pole_seed(const PotentialSpec& spec, int n) {
    if (n < 1) throw validation_error("pole_seed: n must be >= 1");
    if (spec.kind == PotentialKind::DeltaShell) {
        const double la = spec.lambda * spec.a;
        const double re = (n * M_PI / spec.a) * (1.0 - 1.0 / la);
        const double im = (1.0 / spec.a) * std::pow(n * M_PI / la, 2);
        return cplx(re, -im);
    }
    // well mode with evanescent penetration depth 1/sqrt(V - k^2) on each side
    double k_est = n * M_PI / spec.w;
    for (int it = 0; it < 8; ++it) {
        const double under = spec.V - k_est * k_est;
        if (under <= 0.0) break;
        const double weff = spec.w + 2.0 / std::sqrt(under);
        k_est = n * M_PI / weff;
    }
    return cplx(k_est, -1e-3);
}

cplx db_residual_interface_matching(const PotentialSpec& spec, cplx k) {
    // region wavenumbers; amplitudes (A, B) for A e^{i q s} + B e^{-i q s},
    // s local to each region start
    const cplx k2 = k * k;
    const cplx qs[3] = {std::sqrt(k2 - spec.V), std::sqrt(k2), std::sqrt(k2 - spec.V)};
    const double ds[3] = {spec.b, spec.w, spec.b};
    // left region: u = e^{-ikx}: A=0, B=1 (local s = x)
    cplx A = 0.0, B = 1.0;
    cplx q_prev = k;
    for (int i = 0; i < 3; ++i) {
        // match at the region entry (s = 0 of new region)
        const cplx r = q_prev / qs[i];
        const cplx A2 = 0.5 * ((1.0 + r) * A + (1.0 - r) * B);
        const cplx B2 = 0.5 * ((1.0 - r) * A + (1.0 + r) * B);
        // propagate to the region exit
        const cplx e = std::exp(cplx(0, 1) * qs[i] * ds[i]);
        A = A2 * e;
        B = B2 / e;
        q_prev = qs[i];
    }
    // match into the right outside region (wavenumber k)
    const cplx r = q_prev / k;
    const cplx B_out = 0.5 * ((1.0 - r) * A + (1.0 + r) * B);
    // u'(L) - ik u(L) = -2ik B_out
    return cplx(0, -2) * k * B_out;
}

} // namespace qdecay
