#pragma once

#include <iosfwd>
#include <vector>

#include "qdecay/model.hpp"

namespace qdecay {

// One resonance pole kappa = v - i g in the fourth quadrant, with the
// derived energy split kappa^2 = E - i Gamma/2 and lifetime tau = 1/Gamma.
struct ComplexPole {
    int n = 0;
    cplx kappa;

    double v() const { return kappa.real(); }
    double gamma() const { return -kappa.imag(); }
    double energy() const { return kappa.real() * kappa.real() - kappa.imag() * kappa.imag(); }
    double width() const { return 4.0 * v() * gamma(); }  // -2 Im kappa^2
    double lifetime() const { return 1.0 / width(); }
};

struct PoleSet {
    PotentialSpec spec;
    std::vector<ComplexPole> poles;

    int count() const { return static_cast<int>(poles.size()); }
    const ComplexPole& operator[](int n) const { return poles.at(n - 1); }  // 1-based
    double lifetime() const;        // max tau over the set (pole 1 for these models)
    int below_barrier_count() const;  // poles with v < sqrt(V); 0 for delta shell
};

struct RefineOptions {
    double step_tol_rel = 1e-12;      // |dk| < step_tol_rel * max(1, |k|)
    double residual_tol_rel = 1e-10;  // |f| < residual_tol_rel * strength_scale
    int max_iter = 100;
};

// Newton iteration on pole_residual from the given seed.
// Throws no_convergence / wrong_quadrant.
ComplexPole refine_pole(const PotentialSpec& spec, cplx seed,
                        const RefineOptions& opt = {});

// Number of zeros of pole_residual inside the rectangle
// [v_lo, v_hi] x [-g_hi, -g_lo], by winding of arg f around the boundary.
// The contour must avoid zeros (the caller picks gaps between poles).
int argument_principle_count(const PotentialSpec& spec, double v_lo, double v_hi,
                             double g_lo, double g_hi);

// Locate the first N poles ordered by increasing Re kappa, validated:
// residuals within tolerance, strictly ordered, pairwise separation,
// argument-principle count over a strip. Delta shell: closed-form seed
// continuation; double barrier: well-mode seeds plus a rectangular scan
// for the broad above-barrier poles.
PoleSet find_poles(const PotentialSpec& spec, int N);

// CSV cache: header carries the spec fingerprint; reloaded sets are
// re-validated against the residual tolerance.
void save_pole_cache(const PoleSet& set, std::ostream& os);
PoleSet load_pole_cache(const PotentialSpec& spec, std::istream& is);

} // namespace qdecay
