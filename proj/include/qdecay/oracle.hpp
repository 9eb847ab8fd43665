#pragma once

#include <functional>
#include <vector>

#include "qdecay/model.hpp"

namespace qdecay {

// Verification-only paths: direct Schrodinger integration and brute-force
// quadrature. Used by tests and the `verify` CLI subcommand; nothing in the
// resonance-expansion pipeline depends on them.

struct GridState {
    std::vector<cplx> psi;  // interior nodes x = h .. x_max - h, Dirichlet walls
    double h = 0.0;
    double x_max = 0.0;
    double t = 0.0;
    double absorber_start = 0.0;

    double norm() const;               // sqrt(sum |psi|^2 h)
    cplx value_at(double x) const;     // linear interpolation
};

struct TdseParams {
    double h = 1e-3;
    double dt = 1e-5;
    double x_max = 60.0;
    double absorber_start = 40.0;   // cubic ramp from here to x_max
    double absorber_strength = 0.2;
    bool absorber = true;
};

// Crank-Nicolson propagation of the initial box mode under the potential.
// Delta shell is a single grid cell lambda/h at r = a (the node nearest a).
// Throws grid_too_small when density reaches the far wall above 1e-6 of
// the running peak.
GridState tdse_evolve(const PotentialSpec& spec, const InitialState& init, double t_end,
                      const TdseParams& params);

// Same propagation from an arbitrary initial vector and potential (test hook;
// the free-particle case uses V = 0).
GridState tdse_evolve_raw(std::vector<double> potential, std::vector<cplx> psi0,
                          double t_end, const TdseParams& params);

// adaptive Simpson to absolute tolerance (complex integrand)
cplx adaptive_integral(const std::function<cplx(double)>& f, double a, double b,
                       double tol = 1e-13);

// int_a^b f(x) g(x) dx
cplx quad_overlap(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                  double a, double b, double tol = 1e-13);

// Quadrature oracle for the propagation kernel: the defining contour
// integral (i/2pi) int e^{ik rho} e^{-ik^2 t}/(k - kappa) dk rotated to the
// steepest-descent line k = e^{-i pi/4} s, plus the residue picked up when
// arg(kappa) > -pi/4. Valid while rho^2/(8t) stays in exponent range.
cplx moshinsky_m_quadrature(double r, double a, double t, cplx kappa);

} // namespace qdecay
