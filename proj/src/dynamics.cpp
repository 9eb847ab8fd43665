#include "qdecay/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qdecay/errors.hpp"
#include "qdecay/moshinsky.hpp"

namespace qdecay {

std::string to_string(Symmetry s) {
    switch (s) {
        case Symmetry::Single: return "single";
        case Symmetry::Factorized: return "factorized";
        case Symmetry::Symmetric: return "symmetric";
        case Symmetry::Antisymmetric: return "antisymmetric";
    }
    return "?";
}

namespace {

// interior branch: scalar sum over +-n of C_n u_n(x) M(y_n^o)
PsiEval psi_interior(const Expansion& e, int label, double x, double t) {
    PsiEval out;
    const auto& C = e.coeff.at(label);
    const int N = e.truncation();
    const cplx eipi4(M_SQRT1_2, M_SQRT1_2);  // i * e^{-i pi/4}... assembled below
    const double rt = std::sqrt(t);
    cplx acc = 0.0;
    double last = 0.0;
    for (int n = 0; n < N; ++n) {
        const cplx k = e.poles.poles[n].kappa;
        const cplx cu = C[n] * e.states[n].u_value(x);
        // y^o = -e^{-i pi/4} kappa sqrt(t);  i y^o = -e^{i pi/4} kappa sqrt(t)
        const cplx iy_p = -eipi4 * k * rt;
        cplx Mp;
        if (iy_p.imag() >= 0.0) {
            Mp = 0.5 * faddeeva_w(iy_p);
        } else {
            Mp = std::exp(cplx(0, -1) * k * k * t) - 0.5 * faddeeva_w(-iy_p);
        }
        const cplx km = -std::conj(k);
        const cplx iy_m = -eipi4 * km * rt;  // upper half plane always
        const cplx Mm = 0.5 * faddeeva_w(iy_m);
        const cplx term = cu * Mp + std::conj(cu) * Mm;
        acc += term;
        if (n == N - 1) last = std::abs(term);
    }
    out.value = acc;
    out.truncation_warning = last > 1e-8 * std::abs(acc);
    return out;
}

} // namespace

PsiEval psi_single(const Expansion& e, int label, double x, double t,
                   const EvalOptions& opt) {
    if (label < 0 || label >= e.label_count())
        throw validation_error("psi_single: no such particle label");
    if (t == 0.0) return PsiEval{cplx(initial_state_value(e.labels[label], x)), false, false};
    if (t < 0.0) throw validation_error("psi_single: t must be >= 0");

    const double boundary = e.spec.boundary();
    if (x < boundary) return psi_interior(e, label, x, t);

    static thread_local const Expansion* cached_e = nullptr;
    static thread_local int cached_label = -1;
    static thread_local PoleTermTable table;
    if (cached_e != &e || cached_label != label) {
        table = make_term_table(e, label);
        cached_e = &e;
        cached_label = label;
    }
    const KernelResult r = exterior_sum_fn(opt.kernel)(table, x - boundary, t,
                                                       opt.tail_completion);
    PsiEval out;
    out.value = r.psi;
    out.overflow = r.overflow;
    out.truncation_warning = r.last_term_mag > 1e-8 * std::abs(r.psi);
    return out;
}

PsiEval psi_two(const Expansion& e, double x1, double x2, double t, Symmetry sym,
                const EvalOptions& opt) {
    PsiEval out;
    if (sym == Symmetry::Factorized || sym == Symmetry::Single) {
        const PsiEval a1 = psi_single(e, 0, x1, t, opt);
        const PsiEval a2 = psi_single(e, 0, x2, t, opt);
        out.value = a1.value * a2.value;
        out.truncation_warning = a1.truncation_warning || a2.truncation_warning;
        out.overflow = a1.overflow || a2.overflow;
        return out;
    }
    if (e.label_count() < 2)
        throw validation_error("psi_two: entangled states need two particle labels");
    if (e.labels[0].q == e.labels[1].q && sym == Symmetry::Antisymmetric)
        throw validation_error("psi_two: antisymmetric state with identical labels vanishes");
    if (e.labels[0].q == e.labels[1].q)
        throw validation_error("psi_two: entangled states need distinct labels");
    const PsiEval a1 = psi_single(e, 0, x1, t, opt);
    const PsiEval b2 = psi_single(e, 1, x2, t, opt);
    const PsiEval b1 = psi_single(e, 1, x1, t, opt);
    const PsiEval a2 = psi_single(e, 0, x2, t, opt);
    const double sgn = sym == Symmetry::Symmetric ? 1.0 : -1.0;
    out.value = (a1.value * b2.value + sgn * b1.value * a2.value) / M_SQRT2;
    out.truncation_warning = a1.truncation_warning || a2.truncation_warning ||
                             b1.truncation_warning || b2.truncation_warning;
    out.overflow = a1.overflow || a2.overflow || b1.overflow || b2.overflow;
    return out;
}

DensitySeries density_series(const Expansion& e, double x1, std::optional<double> x2,
                             Symmetry sym, const TimeGrid& grid, const EvalOptions& opt) {
    if (grid.points < 2) throw validation_error("density_series: need at least 2 grid points");
    const double tau = e.poles.lifetime();
    const double scale = grid.lifetime_units ? tau : 1.0;
    const double t0 = grid.start * scale, t1 = grid.stop * scale;
    if (!(t0 > 0.0) || !(t1 > t0))
        throw validation_error("density_series: time grid must be increasing within (0, 1e4 tau]");
    if (t1 > 1e4 * tau) throw validation_error("density_series: grid exceeds 1e4 lifetimes");

    DensitySeries s;
    s.x1 = x1;
    s.x2 = x2;
    s.symmetry = sym;
    s.truncation = e.truncation();
    s.lifetime_unit = tau;
    s.log_grid = grid.log_spaced;
    s.spec_fingerprint = e.spec.fingerprint();
    s.t_abs.resize(grid.points);
    for (int i = 0; i < grid.points; ++i) {
        const double f = double(i) / (grid.points - 1);
        s.t_abs[i] = grid.log_spaced ? t0 * std::pow(t1 / t0, f) : t0 + (t1 - t0) * f;
    }
    s.t_lifetimes.resize(grid.points);
    s.density.resize(grid.points);
    s.ln_density.resize(grid.points);
    s.valid.resize(grid.points);
    for (int i = 0; i < grid.points; ++i) {
        const double t = s.t_abs[i];
        s.t_lifetimes[i] = t / tau;
        PsiEval p;
        if (sym == Symmetry::Single) {
            p = psi_single(e, 0, x1, t, opt);
        } else {
            if (!x2) throw validation_error("density_series: two-particle symmetry needs x2");
            p = psi_two(e, x1, *x2, t, sym, opt);
        }
        const double d = std::norm(p.value);
        s.density[i] = d;
        s.ln_density[i] = std::log(d);
        s.valid[i] = p.overflow ? 0 : 1;
    }
    return s;
}

void DensitySeries::write_csv(std::ostream& os) const {
    os << "t_abs,t_lifetimes,x1,x2,density,ln_density,valid_flag\n";
    char line[256];
    for (size_t i = 0; i < t_abs.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      t_abs[i], t_lifetimes[i], x1, x2 ? *x2 : std::nan(""), density[i],
                      ln_density[i], valid[i]);
        os << line;
    }
}

int DensitySeries::global_max_index() const {
    int best = 0;
    for (size_t i = 1; i < density.size(); ++i)
        if (density[i] > density[best]) best = static_cast<int>(i);
    return best;
}

double peak_time(double r, double boundary, const ComplexPole& pole) {
    if (r < boundary) throw validation_error("peak_time: r must be at or beyond the boundary");
    return (r - boundary) / (2.0 * pole.v());
}

double exponential_regime_end(const DensitySeries& s) {
    const int n = static_cast<int>(s.t_abs.size());
    const int ipk = s.global_max_index();
    // fit ln rho ~ a + b t over the early post-peak stretch
    int i0 = ipk, i1 = ipk;
    const double t_fit0 = s.t_abs[ipk] * 1.5, t_fit1 = s.t_abs[ipk] * 3.0;
    for (int i = ipk; i < n; ++i) {
        if (s.t_abs[i] <= t_fit0) i0 = i;
        if (s.t_abs[i] <= t_fit1) i1 = i;
    }
    if (i1 - i0 < 4) throw window_too_short("exponential_regime_end: series too short past the peak");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = i1 - i0 + 1;
    for (int i = i0; i <= i1; ++i) {
        sx += s.t_abs[i];
        sy += s.ln_density[i];
        sxx += s.t_abs[i] * s.t_abs[i];
        sxy += s.t_abs[i] * s.ln_density[i];
    }
    const double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double a = (sy - b * sx) / m;
    // last time the data still follows the exponential fit within 5%
    double t_end = s.t_abs[i1];
    for (int i = i1; i < n; ++i) {
        const double fit = a + b * s.t_abs[i];
        if (std::abs(s.ln_density[i] - fit) <= 0.05 * std::abs(s.ln_density[i]))
            t_end = s.t_abs[i];
    }
    return t_end;
}

double tail_exponent(const DensitySeries& s, double t_lo, double t_hi) {
    if (!(t_hi > t_lo) || t_hi / t_lo < 10.0)
        throw window_too_short("tail_exponent: window must span at least one decade");
    const double t_exp = exponential_regime_end(s);
    if (t_lo < t_exp)
        throw validation_error("tail_exponent: window overlaps the exponential regime");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < s.t_abs.size(); ++i) {
        if (s.t_abs[i] < t_lo || s.t_abs[i] > t_hi || !s.valid[i]) continue;
        const double lx = std::log(s.t_abs[i]);
        sx += lx;
        sy += s.ln_density[i];
        sxx += lx * lx;
        sxy += lx * s.ln_density[i];
        ++m;
    }
    if (m < 8) throw window_too_short("tail_exponent: too few samples in window");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<int> prominent_maxima(const DensitySeries& s, double ln_prominence,
                                  int smooth_window) {
    const int n = static_cast<int>(s.ln_density.size());
    std::vector<double> y = s.ln_density;
    if (smooth_window > 1) {
        const int half = smooth_window / 2;
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            int m = 0;
            for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j) {
                acc += s.ln_density[j];
                ++m;
            }
            y[i] = acc / m;
        }
    }
    std::vector<int> out;
    for (int i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        // prominence: drop required on both sides before a higher point
        double left_min = y[i];
        for (int j = i - 1; j >= 0; --j) {
            left_min = std::min(left_min, y[j]);
            if (y[j] > y[i]) break;
        }
        const bool left_ok = y[i] - left_min >= ln_prominence;
        double right_min = y[i];
        for (int j = i + 1; j < n; ++j) {
            right_min = std::min(right_min, y[j]);
            if (y[j] > y[i]) break;
        }
        const bool right_ok = y[i] - right_min >= ln_prominence;
        if (left_ok && right_ok) out.push_back(i);
    }
    return out;
}

} // namespace qdecay
