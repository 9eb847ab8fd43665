#include "qdecay/poles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qdecay/errors.hpp"

namespace qdecay {

double PoleSet::lifetime() const {
    double best = 0.0;
    for (const auto& p : poles) best = std::max(best, p.lifetime());
    return best;
}

int PoleSet::below_barrier_count() const {
    if (spec.kind != PotentialKind::DoubleBarrier) return 0;
    const double vb = std::sqrt(spec.V);
    int c = 0;
    for (const auto& p : poles)
        if (p.v() < vb) ++c;
    return c;
}

ComplexPole refine_pole(const PotentialSpec& spec, cplx seed, const RefineOptions& opt) {
    if (seed.real() <= 0.0 || seed.imag() > 1e-3)
        throw validation_error("refine_pole: seed must be in the fourth quadrant (or near the real axis)");
    cplx k = seed;
    const double res_tol = opt.residual_tol_rel * spec.strength_scale();
    bool ok = false;
    for (int it = 0; it < opt.max_iter; ++it) {
        const cplx f = pole_residual(spec, k);
        const cplx df = pole_residual_derivative(spec, k);
        const cplx dk = f / df;
        k -= dk;
        if (std::abs(dk) < opt.step_tol_rel * std::max(1.0, std::abs(k)) &&
            std::abs(pole_residual(spec, k)) < res_tol) {
            ok = true;
            break;
        }
    }
    if (!ok) throw no_convergence("refine_pole: Newton did not converge");
    if (k.real() <= 0.0 || k.imag() >= 0.0)
        throw wrong_quadrant("refine_pole: converged outside the fourth quadrant");
    return ComplexPole{0, k};
}

namespace {

// continuous-argument walk along one contour segment, subdividing until
// each step turns by less than ~0.5 rad
double arg_sweep(const PotentialSpec& spec, cplx z0, cplx z1) {
    int n = 64;
    for (int attempt = 0; attempt < 10; ++attempt) {
        double total = 0.0;
        cplx f_prev = pole_residual(spec, z0);
        bool fine = true;
        for (int i = 1; i <= n; ++i) {
            const cplx z = z0 + (z1 - z0) * (double(i) / n);
            const cplx f = pole_residual(spec, z);
            const double d = std::arg(f / f_prev);
            if (std::abs(d) > 0.5) {
                fine = false;
                break;
            }
            total += d;
            f_prev = f;
        }
        if (fine) return total;
        n *= 4;
    }
    throw numeric_error("argument_principle: contour refinement failed (zero on contour?)");
}

} // namespace

int argument_principle_count(const PotentialSpec& spec, double v_lo, double v_hi,
                             double g_lo, double g_hi) {
    const cplx c1(v_lo, -g_lo), c2(v_hi, -g_lo), c3(v_hi, -g_hi), c4(v_lo, -g_hi);
    // clockwise in the fourth quadrant = positive winding for enclosed zeros
    double total = arg_sweep(spec, c1, c2) + arg_sweep(spec, c2, c3) +
                   arg_sweep(spec, c3, c4) + arg_sweep(spec, c4, c1);
    const double winding = -total / (2.0 * M_PI);
    const long count = std::lround(winding);
    if (std::abs(winding - count) > 0.2)
        throw numeric_error("argument_principle: non-integer winding");
    return static_cast<int>(count);
}

namespace {

void validate_set(PoleSet& set, int N) {
    auto& ps = set.poles;
    std::sort(ps.begin(), ps.end(),
              [](const ComplexPole& a, const ComplexPole& b) { return a.v() < b.v(); });
    if (static_cast<int>(ps.size()) < N)
        throw missed_pole("find_poles: fewer poles located than requested");
    ps.resize(N);
    const double res_tol = 1e-10 * set.spec.strength_scale();
    for (int i = 0; i < N; ++i) {
        ps[i].n = i + 1;
        if (std::abs(pole_residual(set.spec, ps[i].kappa)) > res_tol)
            throw numeric_error("find_poles: residual tolerance violated after refinement");
        if (i > 0) {
            if (!(ps[i].v() > ps[i - 1].v()))
                throw numeric_error("find_poles: poles not strictly ordered");
            if (std::abs(ps[i].kappa - ps[i - 1].kappa) < 1e-6)
                throw numeric_error("find_poles: near-degenerate pole pair");
        }
    }
    // argument-principle completeness check over a strip covering the
    // first few poles (contour picked between poles, off the real axis)
    const int m = std::min(N, 12);
    const double v_hi = (m < N) ? 0.5 * (ps[m - 1].v() + ps[m].v())
                                : ps[m - 1].v() + 0.45 * M_PI / set.spec.boundary();
    double g_hi = 0.0;
    for (int i = 0; i < m; ++i) g_hi = std::max(g_hi, ps[i].gamma());
    g_hi = 2.0 * g_hi + 0.5;
    const int counted = argument_principle_count(set.spec, 1e-6, v_hi, 1e-9, g_hi);
    if (counted != m)
        throw missed_pole("find_poles: argument-principle count mismatch");
}

PoleSet find_poles_delta_shell(const PotentialSpec& spec, int N) {
    PoleSet set{spec, {}};
    cplx seed = pole_seed(spec, 1);
    for (int n = 1; n <= N; ++n) {
        ComplexPole p = refine_pole(spec, seed);
        set.poles.push_back(p);
        seed = p.kappa + M_PI / spec.a;  // continuation: gamma varies slowly
    }
    validate_set(set, N);
    return set;
}

PoleSet find_poles_double_barrier(const PotentialSpec& spec, int N) {
    PoleSet set{spec, {}};
    auto push_unique = [&set](const ComplexPole& p) {
        for (const auto& q : set.poles)
            if (std::abs(q.kappa - p.kappa) < 1e-8) return;
        set.poles.push_back(p);
    };

    // sub-barrier well modes from the closed-form seed
    for (int n = 1; n * M_PI / spec.w < std::sqrt(spec.V) * 1.2; ++n) {
        try {
            push_unique(refine_pole(spec, pole_seed(spec, n)));
        } catch (const numeric_error&) {
            // grid scan below will catch it
        }
    }

    // rectangular scan: cells where Re f and Im f both change sign feed Newton
    double v_max = std::sqrt(spec.V) + (N + 4) * M_PI / spec.boundary();
    double g_max = 3.5;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const int nx = static_cast<int>(40 * v_max), ny = 90;
        std::vector<cplx> f((nx + 1) * (ny + 1));
        auto fat = [&](int i, int j) -> cplx& { return f[i * (ny + 1) + j]; };
        auto gx = [&](int i) { return 0.03 + (v_max - 0.03) * i / nx; };
        auto gy = [&](int j) { return -1e-7 - (g_max - 1e-7) * j / ny; };
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j <= ny; ++j)
                fat(i, j) = pole_residual(spec, cplx(gx(i), gy(j)));
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                const cplx c[4] = {fat(i, j), fat(i + 1, j), fat(i, j + 1), fat(i + 1, j + 1)};
                bool re_p = false, re_m = false, im_p = false, im_m = false;
                for (const cplx& z : c) {
                    (z.real() >= 0 ? re_p : re_m) = true;
                    (z.imag() >= 0 ? im_p : im_m) = true;
                }
                if (!(re_p && re_m && im_p && im_m)) continue;
                const cplx center(0.5 * (gx(i) + gx(i + 1)), 0.5 * (gy(j) + gy(j + 1)));
                try {
                    ComplexPole p = refine_pole(spec, center);
                    if (p.v() <= v_max) push_unique(p);
                } catch (const numeric_error&) {
                }
            }
        }
        std::sort(set.poles.begin(), set.poles.end(),
                  [](const ComplexPole& a, const ComplexPole& b) { return a.v() < b.v(); });
        if (static_cast<int>(set.poles.size()) >= N) break;
        v_max *= 1.3;
        g_max += 1.0;
    }
    validate_set(set, N);
    return set;
}

} // namespace

PoleSet find_poles(const PotentialSpec& spec, int N) {
    if (N < 1) throw validation_error("find_poles: N must be >= 1");
    return spec.kind == PotentialKind::DeltaShell ? find_poles_delta_shell(spec, N)
                                                  : find_poles_double_barrier(spec, N);
}

void save_pole_cache(const PoleSet& set, std::ostream& os) {
    os << "# qdecay-poles v1 fingerprint=" << set.spec.fingerprint() << "\n";
    os << "n,re_k,im_k,residual_abs\n";
    char line[128];
    for (const auto& p : set.poles) {
        const double res = std::abs(pole_residual(set.spec, p.kappa));
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.3g\n", p.n, p.kappa.real(),
                      p.kappa.imag(), res);
        os << line;
    }
}

PoleSet load_pole_cache(const PotentialSpec& spec, std::istream& is) {
    std::string header;
    std::getline(is, header);
    const std::string want = "# qdecay-poles v1 fingerprint=" + spec.fingerprint();
    if (header != want) throw validation_error("pole cache: fingerprint mismatch");
    std::string cols;
    std::getline(is, cols);
    PoleSet set{spec, {}};
    std::string line;
    const double res_tol = 1e-10 * spec.strength_scale();
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int n = 0;
        double re = 0, im = 0, res = 0;
        if (std::sscanf(line.c_str(), "%d,%lg,%lg,%lg", &n, &re, &im, &res) != 4)
            throw validation_error("pole cache: malformed line");
        ComplexPole p{n, cplx(re, im)};
        if (std::abs(pole_residual(spec, p.kappa)) > res_tol)
            throw numeric_error("pole cache: stale entry fails residual re-validation");
        set.poles.push_back(p);
    }
    return set;
}

} // namespace qdecay
