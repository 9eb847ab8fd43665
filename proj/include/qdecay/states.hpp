#pragma once

#include <iosfwd>
#include <vector>

#include "qdecay/poles.hpp"

namespace qdecay {

// Normalized Gamow eigenfunction for one pole:
//   int u^2 dx + i (surface terms)/(2 kappa) = 1,
// outgoing du/dx = +i kappa u at the right boundary (and -i kappa u at
// x = 0 for the double barrier). Amplitude branch fixed to Re A >= 0.
struct ResonanceState {
    PotentialSpec spec;
    ComplexPole pole;
    cplx amplitude;                  // A (delta shell: u = A sin(kappa r) inside)
    cplx u_boundary;                 // u at the confinement boundary
    cplx u_left;                     // u(0); zero for the delta shell
    std::array<std::array<cplx, 2>, 4> regions{};  // double barrier: A-scaled (u,u')

    cplx u_value(double x) const;    // valid on [0, boundary] and beyond (outgoing)
};

ResonanceState normalize_state(const PotentialSpec& spec, const ComplexPole& pole);

// C_n = int Psi(r,0) u_n(r) dr over the initial-state support (closed form).
cplx coefficient(const ResonanceState& state, const InitialState& init);

// Pole set + states + coefficients for one or two particle labels; the
// reusable evolution kernel input.
struct Expansion {
    PotentialSpec spec;
    PoleSet poles;
    std::vector<ResonanceState> states;
    std::vector<InitialState> labels;
    std::vector<std::vector<cplx>> coeff;  // [label][pole]; Cbar = C for real initial states

    int truncation() const { return poles.count(); }
    int label_count() const { return static_cast<int>(labels.size()); }

    static Expansion build(const PotentialSpec& spec, PoleSet poles,
                           std::vector<InitialState> labels);
};

// Re sum_{n<=N} C_n Cbar_n (quasi-probability strengths; -> 1 as N grows).
double sum_rule(const Expansion& e, int label, int N);

// Re sum_{n<=N} C_n u_n(x); converges to the initial state inside the
// confinement region (x != boundary).
double reconstruct_initial(const Expansion& e, int label, double x, int N);

// CSV: n, re_C, im_C, re_CCbar
void export_coefficients(const Expansion& e, int label, std::ostream& os);

} // namespace qdecay
