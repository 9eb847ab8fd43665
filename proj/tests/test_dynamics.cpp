#include <doctest.h>

#include "qdecay/dynamics.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/moshinsky.hpp"
#include "support.hpp"

using namespace qdecay;

namespace {

const PotentialSpec kShell = PotentialSpec::delta_shell(100.0, 1.0);

const Expansion& small_expansion() {  // N=60: plenty for interior checks
    static const Expansion e = Expansion::build(
        kShell, find_poles(kShell, 60),
        {InitialState::box_mode(1, 0.0, 1.0), InitialState::box_mode(6, 0.0, 1.0)});
    return e;
}

const Expansion& big_expansion() {
    static const Expansion e = Expansion::build(
        kShell, find_poles(kShell, 1000),
        {InitialState::box_mode(1, 0.0, 1.0), InitialState::box_mode(6, 0.0, 1.0)});
    return e;
}

} // namespace

TEST_CASE("interior branch reproduces the initial state as t -> 0") {
    const auto& e = big_expansion();
    for (double x : {0.25, 0.5, 0.8}) {
        const cplx got = psi_single(e, 0, x, 1e-6).value;
        CHECK(std::abs(got - initial_state_value(e.labels[0], x)) < 1e-2);
    }
    // t = 0 delegates to the closed form exactly
    CHECK(psi_single(e, 0, 0.5, 0.0).value ==
          cplx(initial_state_value(e.labels[0], 0.5)));
}

TEST_CASE("region continuity at the boundary") {
    const auto& e = big_expansion();
    const double eps = 1e-8 * kShell.a;
    for (double t : {5.0, 30.0, 200.0}) {
        const cplx in = psi_single(e, 0, kShell.a - eps, t).value;
        const cplx out = psi_single(e, 0, kShell.a + eps, t).value;
        CHECK(std::abs(in - out) / std::abs(out) < 1e-6);
    }
}

TEST_CASE("antisymmetric state vanishes at coincident points") {
    const auto& e = small_expansion();
    const cplx v = psi_two(e, 7.0, 7.0, 12.0, Symmetry::Antisymmetric).value;
    CHECK(std::abs(v) == 0.0);
}

TEST_CASE("antisymmetric state with identical labels is rejected") {
    Expansion e = Expansion::build(kShell, find_poles(kShell, 5),
                                   {InitialState::box_mode(1, 0.0, 1.0),
                                    InitialState::box_mode(1, 0.0, 1.0)});
    CHECK_THROWS_AS(psi_two(e, 3.0, 4.0, 1.0, Symmetry::Antisymmetric), validation_error);
}

TEST_CASE("factorized density equals the product of singles") {
    const auto& e = small_expansion();
    const double t = 42.0, x1 = 55.0, x2 = 201.0;
    const cplx two = psi_two(e, x1, x2, t, Symmetry::Factorized).value;
    const cplx prod = psi_single(e, 0, x1, t).value * psi_single(e, 0, x2, t).value;
    CHECK(std::abs(std::norm(two) - std::norm(prod)) <= 1e-14 * std::norm(prod));
}

TEST_CASE("exchange symmetry of the two-particle densities") {
    const auto& e = small_expansion();
    const double t = 33.0, x1 = 40.0, x2 = 160.0;
    for (auto sym : {Symmetry::Symmetric, Symmetry::Antisymmetric}) {
        const double d12 = std::norm(psi_two(e, x1, x2, t, sym).value);
        const double d21 = std::norm(psi_two(e, x2, x1, t, sym).value);
        CHECK(std::abs(d12 - d21) <= 1e-12 * std::max(d12, d21));
    }
}

TEST_CASE("product form equals the double-sum expansion") {
    // small truncation: the double sum is O((2N)^2)
    Expansion e = Expansion::build(kShell, find_poles(kShell, 24),
                                   {InitialState::box_mode(1, 0.0, 1.0),
                                    InitialState::box_mode(6, 0.0, 1.0)});
    const double t = 18.0;
    for (auto [x1, x2] : {std::pair{30.0, 70.0}, {0.5, 70.0}, {0.4, 0.7}}) {
        for (double sign : {1.0, -1.0}) {
            // build the double sum directly here with explicit factors
            const int N = e.truncation();
            const double L = e.spec.boundary();
            auto factors = [&](double x) {
                std::vector<cplx> u(2 * N), m(2 * N);
                for (int n = 0; n < N; ++n) {
                    const cplx k = e.poles.poles[n].kappa;
                    const cplx km = -std::conj(k);
                    if (x >= L) {
                        u[n] = e.states[n].u_boundary;
                        u[N + n] = std::conj(u[n]);
                        m[n] = moshinsky_m(x, L, t, k);
                        m[N + n] = moshinsky_m(x, L, t, km);
                    } else {
                        u[n] = e.states[n].u_value(x);
                        u[N + n] = std::conj(u[n]);
                        m[n] = moshinsky_m(L, L, t, k);
                        m[N + n] = moshinsky_m(L, L, t, km);
                    }
                }
                return std::pair{u, m};
            };
            auto [u1, m1] = factors(x1);
            auto [u2, m2] = factors(x2);
            std::vector<cplx> Ca(2 * N), Cb(2 * N);
            for (int n = 0; n < N; ++n) {
                Ca[n] = e.coeff[0][n];
                Ca[N + n] = std::conj(Ca[n]);
                Cb[n] = e.coeff[1][n];
                Cb[N + n] = std::conj(Cb[n]);
            }
            cplx acc = 0.0;
            for (int p = 0; p < 2 * N; ++p) {
                const cplx left = u1[p] * m1[p];
                cplx inner = 0.0;
                for (int q = 0; q < 2 * N; ++q)
                    inner += (Ca[p] * Cb[q] + sign * Cb[p] * Ca[q]) * u2[q] * m2[q];
                acc += left * inner;
            }
            acc /= M_SQRT2;
            const auto sym = sign > 0 ? Symmetry::Symmetric : Symmetry::Antisymmetric;
            const cplx prod = psi_two(e, x1, x2, t, sym).value;
            CHECK(std::abs(acc - prod) < 1e-12 * std::max(1e-30, std::abs(prod)));
        }
    }
}

TEST_CASE("truncation convergence at the main peak") {
    // N = 500 -> 1000 changes the peak density by < 1e-6 relative
    const auto& e1000 = big_expansion();
    Expansion e500 = Expansion::build(kShell, find_poles(kShell, 500),
                                      {InitialState::box_mode(1, 0.0, 1.0)});
    const double t_pk = 2999.0 / (2.0 * e1000.poles[1].v());
    const double a = std::norm(psi_single(e500, 0, 3000.0, t_pk).value);
    const double b = std::norm(psi_single(e1000, 0, 3000.0, t_pk).value);
    CHECK(std::abs(a - b) / b < 1e-6);
}

TEST_CASE("density series: grid, units, validity flags") {
    const auto& e = small_expansion();
    TimeGrid g{false, 0.5, 8.0, 64, true};
    const DensitySeries s = density_series(e, 100.0, std::nullopt, Symmetry::Single, g);
    REQUIRE(static_cast<int>(s.t_abs.size()) == 64);
    const double tau = e.poles.lifetime();
    CHECK(s.t_abs.front() == doctest::Approx(0.5 * tau));
    CHECK(s.t_abs.back() == doctest::Approx(8.0 * tau));
    for (size_t i = 1; i < s.t_abs.size(); ++i) CHECK(s.t_abs[i] > s.t_abs[i - 1]);
    for (size_t i = 0; i < s.density.size(); ++i) {
        CHECK(s.density[i] >= 0.0);
        CHECK(s.valid[i] == 1);
    }
    CHECK(s.lifetime_unit == doctest::Approx(tau));
    CHECK_THROWS_AS(density_series(e, 100.0, std::nullopt, Symmetry::Single,
                                   TimeGrid{false, 1.0, 2e4, 8, true}),
                    validation_error);
}

TEST_CASE("peak time law") {
    const auto& e = small_expansion();
    CHECK(peak_time(1.0, 1.0, e.poles[1]) == 0.0);
    CHECK(peak_time(3000.0, 1.0, e.poles[1]) ==
          doctest::Approx(2999.0 / (2.0 * e.poles[1].v())));
    CHECK_THROWS_AS(peak_time(0.5, 1.0, e.poles[1]), validation_error);
}

TEST_CASE("tail_exponent recovers a synthetic power law") {
    DensitySeries s;
    s.t_abs.resize(200);
    for (int i = 0; i < 200; ++i) {
        const double t = 1.0 * std::pow(1e4, i / 199.0);
        s.t_abs[i] = t;
        // exponential hump then a t^-3 tail
        const double d = std::exp(-t / 3.0) + 1e-4 / (t * t * t);
        s.density.push_back(d);
        s.ln_density.push_back(std::log(d));
        s.t_lifetimes.push_back(t);
        s.valid.push_back(1);
    }
    const double slope = tail_exponent(s, 300.0, 9000.0);
    CHECK(slope == doctest::Approx(-3.0).epsilon(0.01));
    CHECK_THROWS_AS(tail_exponent(s, 300.0, 2000.0), window_too_short);
    CHECK_THROWS_AS(tail_exponent(s, 2.0, 9000.0), validation_error);  // inside exponential
}

TEST_CASE("truncation warning surfaces for hopeless truncations") {
    // at t -> 0 with few poles the last term still carries weight
    Expansion e = Expansion::build(kShell, find_poles(kShell, 4),
                                   {InitialState::box_mode(1, 0.0, 1.0)});
    const PsiEval p = psi_single(e, 0, 0.5, 1e-8);
    CHECK(p.truncation_warning);
    const PsiEval late = psi_single(e, 0, 3.0, 50.0);
    CHECK_FALSE(late.truncation_warning);
}
