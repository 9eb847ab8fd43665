#include "qdecay/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "qdecay/errors.hpp"

namespace qdecay {

double GridState::norm() const {
    double s = 0.0;
    for (const cplx& v : psi) s += std::norm(v);
    return std::sqrt(s * h);
}

cplx GridState::value_at(double x) const {
    const double pos = x / h - 1.0;  // psi[0] is at x = h
    const int i = static_cast<int>(std::floor(pos));
    if (i < 0 || i + 1 >= static_cast<int>(psi.size())) return 0.0;
    const double f = pos - i;
    return psi[i] * (1.0 - f) + psi[i + 1] * f;
}

namespace {

// one Crank-Nicolson step: (I + i dt/2 H) psi' = (I - i dt/2 H) psi,
// H tridiagonal with Dirichlet walls; Thomas solve
struct CnStepper {
    int n;
    double h, dt;
    std::vector<cplx> diag_a, rhs_diag;  // A diag, B diag
    cplx off_a, off_b;
    std::vector<cplx> cp, dp;  // Thomas scratch

    CnStepper(const std::vector<double>& V, const std::vector<double>& W, double h_, double dt_)
        : n(static_cast<int>(V.size())), h(h_), dt(dt_), diag_a(n), rhs_diag(n), cp(n), dp(n) {
        const double inv_h2 = 1.0 / (h * h);
        const cplx i_half_dt(0.0, 0.5 * dt);
        off_a = i_half_dt * (-inv_h2);
        off_b = -off_a;
        for (int j = 0; j < n; ++j) {
            const cplx Hjj = 2.0 * inv_h2 + V[j] - cplx(0.0, W[j]);
            diag_a[j] = 1.0 + i_half_dt * Hjj;
            rhs_diag[j] = 1.0 - i_half_dt * Hjj;
        }
    }

    void step(std::vector<cplx>& psi) {
        // rhs = B psi
        cplx prev = 0.0;
        for (int j = 0; j < n; ++j) {
            const cplx here = psi[j];
            const cplx next = (j + 1 < n) ? psi[j + 1] : cplx(0.0);
            dp[j] = rhs_diag[j] * here + off_b * (prev + next);
            prev = here;
        }
        // Thomas forward sweep on [off_a, diag_a, off_a]
        cp[0] = off_a / diag_a[0];
        dp[0] = dp[0] / diag_a[0];
        for (int j = 1; j < n; ++j) {
            const cplx m = diag_a[j] - off_a * cp[j - 1];
            cp[j] = off_a / m;
            dp[j] = (dp[j] - off_a * dp[j - 1]) / m;
        }
        psi[n - 1] = dp[n - 1];
        for (int j = n - 2; j >= 0; --j) psi[j] = dp[j] - cp[j] * psi[j + 1];
    }
};

} // namespace

GridState tdse_evolve_raw(std::vector<double> potential, std::vector<cplx> psi0, double t_end,
                          const TdseParams& p) {
    const int n = static_cast<int>(potential.size());
    if (static_cast<int>(psi0.size()) != n)
        throw validation_error("tdse_evolve_raw: potential/psi size mismatch");
    std::vector<double> W(n, 0.0);
    if (p.absorber) {
        const double span = p.x_max - p.absorber_start;
        for (int j = 0; j < n; ++j) {
            const double x = (j + 1) * p.h;
            if (x > p.absorber_start) {
                const double f = (x - p.absorber_start) / span;
                W[j] = p.absorber_strength * f * f * f;
            }
        }
    }
    CnStepper stepper(potential, W, p.h, p.dt);
    const long steps = std::lround(t_end / p.dt);
    double peak = 0.0;
    const int wall = n - 2;
    long check_every = std::max(1L, steps / 256);
    for (long s = 0; s < steps; ++s) {
        stepper.step(psi0);
        if (s % check_every == 0) {
            for (const cplx& v : psi0) peak = std::max(peak, std::norm(v));
            if (std::norm(psi0[wall]) > 1e-6 * peak)
                throw grid_too_small("tdse_evolve: density reached the far wall");
        }
    }
    GridState gs;
    gs.psi = std::move(psi0);
    gs.h = p.h;
    gs.x_max = p.x_max;
    gs.t = steps * p.dt;
    gs.absorber_start = p.absorber_start;
    return gs;
}

GridState tdse_evolve(const PotentialSpec& spec, const InitialState& init, double t_end,
                      const TdseParams& p) {
    const int n = static_cast<int>(std::lround(p.x_max / p.h)) - 1;
    std::vector<double> V(n, 0.0);
    if (spec.kind == PotentialKind::DeltaShell) {
        const int ja = static_cast<int>(std::lround(spec.a / p.h)) - 1;
        if (ja < 0 || ja >= n) throw validation_error("tdse_evolve: delta radius outside grid");
        V[ja] = spec.lambda / p.h;
    } else {
        for (int j = 0; j < n; ++j) {
            const double x = (j + 1) * p.h;
            const bool in_barrier =
                (x >= 0.0 && x <= spec.b) || (x >= spec.b + spec.w && x <= 2 * spec.b + spec.w);
            if (in_barrier) V[j] = spec.V;
        }
    }
    std::vector<cplx> psi(n);
    for (int j = 0; j < n; ++j) psi[j] = initial_state_value(init, (j + 1) * p.h);
    // normalize on the grid
    double s = 0.0;
    for (const cplx& v : psi) s += std::norm(v);
    const double inv = 1.0 / std::sqrt(s * p.h);
    for (cplx& v : psi) v *= inv;
    return tdse_evolve_raw(std::move(V), std::move(psi), t_end, p);
}

namespace {

cplx simpson(double a, double b, cplx fa, cplx fm, cplx fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

cplx adaptive_step(const std::function<cplx(double)>& f, double a, double m, double b,
                   cplx fa, cplx fm, cplx fb, cplx whole, double tol, int depth,
                   bool& tol_ok) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = f(lm), frm = f(rm);
    const cplx left = simpson(a, m, fa, flm, fm);
    const cplx right = simpson(m, b, fm, frm, fb);
    const cplx delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth > 48) {
        if (depth > 48 && std::abs(delta) > 15.0 * tol) tol_ok = false;
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, tol_ok) +
           adaptive_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, tol_ok);
}

} // namespace

cplx adaptive_integral(const std::function<cplx(double)>& f, double a, double b, double tol) {
    // pre-split so oscillatory integrands are seen by the error estimate
    const int panels = 64;
    cplx total = 0.0;
    bool tol_ok = true;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + (b - a) * i / panels;
        const double pb = a + (b - a) * (i + 1) / panels;
        const double pm = 0.5 * (pa + pb);
        const cplx fa = f(pa), fm = f(pm), fb = f(pb);
        const cplx whole = simpson(pa, pb, fa, fm, fb);
        total += adaptive_step(f, pa, pm, pb, fa, fm, fb, whole, tol / panels, 0, tol_ok);
    }
    if (!tol_ok) throw tolerance_not_met("adaptive_integral: tolerance not met");
    return total;
}

cplx quad_overlap(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                  double a, double b, double tol) {
    return adaptive_integral([&](double x) { return f(x) * g(x); }, a, b, tol);
}

cplx moshinsky_m_quadrature(double r, double a, double t, cplx kappa) {
    if (!(t > 0.0)) throw validation_error("moshinsky quadrature: t must be > 0");
    const double rho = r - a;
    const cplx rot(M_SQRT1_2, -M_SQRT1_2);  // e^{-i pi/4}
    auto integrand = [&](double s_) -> cplx {
        const cplx k = rot * s_;
        return std::exp(cplx(0, 1) * (k * rho - k * k * t)) / (k - kappa) * rot;
    };
    // integrand peaks near s = rho/(2 sqrt2 t) ... just cover generously
    const double s_peak = rho / (2.0 * M_SQRT2 * t) * 2.0;
    const double width = 10.0 / std::sqrt(t);
    const double lo = std::min(-12.0 / std::sqrt(t), -width);
    const double hi = std::max(12.0 / std::sqrt(t), s_peak + 30.0 * width);
    cplx I = cplx(0, 1.0 / (2.0 * M_PI)) * adaptive_integral(integrand, lo, hi, 1e-13);
    const double ang = std::arg(kappa);
    if (ang > -M_PI / 4.0 && ang < 0.0)
        I += std::exp(cplx(0, 1) * (kappa * rho - kappa * kappa * t));
    return I;
}

} // namespace qdecay
