#pragma once

#include <optional>
#include <string>

#include "qdecay/kernels.hpp"

namespace qdecay {

enum class Symmetry { Single, Factorized, Symmetric, Antisymmetric };

std::string to_string(Symmetry s);

struct EvalOptions {
    bool tail_completion = false;  // analytic completion of the n > N exterior tail
    KernelKind kernel = KernelKind::Auto;
};

struct PsiEval {
    cplx value;
    bool truncation_warning = false;  // last term > 1e-8 of the sum magnitude
    bool overflow = false;
};

// Single-particle decaying wave function, both branches:
//   x <= boundary: sum_n C_n u_n(x) M(y_n^o)
//   x >= boundary: sum_n C_n u_n(boundary) M(y_n)
// with the +-n families evaluated explicitly (kappa_{-n} = -conj kappa_n).
// t = 0 returns the closed-form initial state.
PsiEval psi_single(const Expansion& e, int label, double x, double t,
                   const EvalOptions& opt = {});

// (1/sqrt2)[psi_a(x1) psi_b(x2) +- psi_b(x1) psi_a(x2)], or the factorized
// product psi_a(x1) psi_a(x2). Entangled symmetries need two distinct labels.
PsiEval psi_two(const Expansion& e, double x1, double x2, double t, Symmetry sym,
                const EvalOptions& opt = {});

struct TimeGrid {
    bool log_spaced = false;
    double start = 0.0, stop = 0.0;  // in lifetime units unless absolute
    int points = 0;
    bool lifetime_units = true;
};

struct DensitySeries {
    std::vector<double> t_abs, t_lifetimes;
    double x1 = 0.0;
    std::optional<double> x2;
    std::vector<double> density, ln_density;
    std::vector<int> valid;  // 0 marks overflow-flagged grid points
    // metadata
    std::string spec_fingerprint;
    Symmetry symmetry = Symmetry::Single;
    int truncation = 0;
    double lifetime_unit = 0.0;
    bool log_grid = false;

    void write_csv(std::ostream& os) const;
    int global_max_index() const;
};

DensitySeries density_series(const Expansion& e, double x1, std::optional<double> x2,
                             Symmetry sym, const TimeGrid& grid,
                             const EvalOptions& opt = {});

// Wavefront peak-time law t = (r - boundary)/(2 v).
double peak_time(double r, double boundary, const ComplexPole& pole);

// Least-squares slope of ln density vs ln t over [t_lo, t_hi].
// The window must span >= 1 decade and lie beyond the end of the
// exponential regime (auto-detected from the series).
double tail_exponent(const DensitySeries& s, double t_lo, double t_hi);

// End of the exponential regime: last time where ln density deviates
// more than 5% from the linear-in-t fit of the post-peak stretch.
double exponential_regime_end(const DensitySeries& s);

// Local maxima of ln density with at least the given prominence
// (indices, ascending t). smooth_window > 1 applies a centered moving
// average first, suppressing the fast interference fringes.
std::vector<int> prominent_maxima(const DensitySeries& s, double ln_prominence,
                                  int smooth_window = 0);

} // namespace qdecay
