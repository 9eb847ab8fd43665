#include "qdecay/states.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "qdecay/errors.hpp"

namespace qdecay {

cplx ResonanceState::u_value(double x) const {
    const double L = spec.boundary();
    const cplx k = pole.kappa;
    if (x >= L) return u_boundary * std::exp(cplx(0, 1) * k * (x - L));
    if (spec.kind == PotentialKind::DeltaShell) {
        return amplitude * std::sin(k * x);
    }
    if (x <= 0.0) return u_left * std::exp(cplx(0, -1) * k * x);
    const cplx k2 = k * k;
    const cplx q2s[3] = {k2 - spec.V, k2, k2 - spec.V};
    const double x0s[3] = {0.0, spec.b, spec.b + spec.w};
    const double x1s[3] = {spec.b, spec.b + spec.w, L};
    for (int i = 0; i < 3; ++i) {
        if (x <= x1s[i] + 1e-14) {
            cplx u = regions[i][0], up = regions[i][1];
            prop_step(u, up, q2s[i], x - x0s[i]);
            return u;
        }
    }
    return u_boundary;
}

ResonanceState normalize_state(const PotentialSpec& spec, const ComplexPole& pole) {
    ResonanceState st;
    st.spec = spec;
    st.pole = pole;
    const cplx k = pole.kappa;

    cplx normalizer;
    if (spec.kind == PotentialKind::DeltaShell) {
        const double a = spec.a;
        const cplx ska = std::sin(k * a);
        normalizer = 0.5 * a - std::sin(2.0 * k * a) / (4.0 * k) + cplx(0, 1) * ska * ska / (2.0 * k);
    } else {
        const auto reg = db_region_values(spec, k);
        const cplx k2 = k * k;
        const cplx q2s[3] = {k2 - spec.V, k2, k2 - spec.V};
        const double ds[3] = {spec.b, spec.w, spec.b};
        cplx integral = 0.0;
        for (int i = 0; i < 3; ++i)
            integral += segment_u2_integral(reg[i][0], reg[i][1], q2s[i], ds[i]);
        const cplx u0 = reg[0][0], uL = reg[3][0];
        normalizer = integral + cplx(0, 1) * (u0 * u0 + uL * uL) / (2.0 * k);
    }
    if (std::abs(normalizer) < 1e-14)
        throw degenerate_normalizer("normalize_state: vanishing normalizer (not a valid pole?)");

    cplx A = 1.0 / std::sqrt(normalizer);
    if (A.real() < 0.0 || (A.real() == 0.0 && A.imag() < 0.0)) A = -A;
    st.amplitude = A;

    if (spec.kind == PotentialKind::DeltaShell) {
        st.u_left = 0.0;
        st.u_boundary = A * std::sin(k * spec.a);
    } else {
        const auto reg = db_region_values(spec, k);
        for (int i = 0; i < 4; ++i) st.regions[i] = {A * reg[i][0], A * reg[i][1]};
        st.u_left = st.regions[0][0];
        st.u_boundary = st.regions[3][0];
    }
    return st;
}

cplx coefficient(const ResonanceState& st, const InitialState& init) {
    const PotentialSpec& spec = st.spec;
    init.validate(spec);
    const cplx k = st.pole.kappa;

    if (spec.kind == PotentialKind::DeltaShell) {
        if (std::abs(init.x0) > 1e-12 || std::abs(init.x1 - spec.a) > 1e-12)
            throw validation_error("coefficient: delta-shell box modes span [0, a]");
        const double a = spec.a;
        const double kq = init.q * M_PI / a;
        const double sgn = (init.q % 2 == 0) ? 1.0 : -1.0;  // (-1)^q
        // int_0^a sin(kq r) sin(k r) dr, using sin(kq a) = 0
        const cplx I = -sgn * std::sin(k * a) * kq / (kq * kq - k * k);
        return st.amplitude * std::sqrt(2.0 / a) * I;
    }

    if (std::abs(init.x0 - spec.b) > 1e-12 || std::abs(init.x1 - (spec.b + spec.w)) > 1e-12)
        throw validation_error("coefficient: double-barrier box modes span the well");
    const double w = spec.w;
    const double alpha = init.q * M_PI / w;
    const double sgn = (init.q % 2 == 0) ? 1.0 : -1.0;
    const cplx c = std::cos(k * w), s = std::sin(k * w);
    const cplx denom = alpha * alpha - k * k;
    const cplx I1 = (1.0 - sgn * c) * alpha / denom;  // int sin(alpha s) cos(k s)
    const cplx I2 = -sgn * s * alpha / denom;         // int sin(alpha s) sin(k s)
    const cplx u0 = st.regions[1][0], up0 = st.regions[1][1];
    return std::sqrt(2.0 / w) * (u0 * I1 + (up0 / k) * I2);
}

Expansion Expansion::build(const PotentialSpec& spec, PoleSet poles,
                           std::vector<InitialState> labels) {
    Expansion e;
    e.spec = spec;
    e.poles = std::move(poles);
    e.labels = std::move(labels);
    e.states.reserve(e.poles.count());
    for (const auto& p : e.poles.poles) e.states.push_back(normalize_state(spec, p));
    e.coeff.resize(e.labels.size());
    for (size_t s = 0; s < e.labels.size(); ++s) {
        e.coeff[s].reserve(e.states.size());
        for (const auto& st : e.states) e.coeff[s].push_back(coefficient(st, e.labels[s]));
    }
    return e;
}

double sum_rule(const Expansion& e, int label, int N) {
    if (N > e.truncation()) throw validation_error("sum_rule: N exceeds expansion truncation");
    const auto& C = e.coeff.at(label);
    double acc = 0.0;
    for (int n = 0; n < N; ++n) acc += (C[n] * C[n]).real();  // Cbar = C (real states)
    return acc;
}

double reconstruct_initial(const Expansion& e, int label, double x, int N) {
    const double L = e.spec.boundary();
    if (!(x > 0.0) || !(x < L))
        throw validation_error("reconstruct_initial: x must lie strictly inside the confinement region");
    if (N > e.truncation()) throw validation_error("reconstruct_initial: N exceeds truncation");
    const auto& C = e.coeff.at(label);
    double acc = 0.0;
    for (int n = 0; n < N; ++n) acc += (C[n] * e.states[n].u_value(x)).real();
    return acc;
}

void export_coefficients(const Expansion& e, int label, std::ostream& os) {
    os << "n,re_C,im_C,re_CCbar\n";
    const auto& C = e.coeff.at(label);
    char line[128];
    for (size_t n = 0; n < C.size(); ++n) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", n + 1, C[n].real(),
                      C[n].imag(), (C[n] * C[n]).real());
        os << line;
    }
}

} // namespace qdecay
