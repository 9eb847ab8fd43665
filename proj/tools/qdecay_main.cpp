#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdecay/errors.hpp"
#include "qdecay/experiment.hpp"
#include "qdecay/moshinsky.hpp"
#include "qdecay/oracle.hpp"

using namespace qdecay;

namespace {

ExperimentConfig resolve_config(const std::string& preset_name, const std::string& config_path,
                                int n_poles_override) {
    ExperimentConfig cfg;
    std::string file_text;
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw validation_error("cannot open config file: " + config_path);
        std::stringstream ss;
        ss << is.rdbuf();
        file_text = ss.str();
    }
    if (!preset_name.empty()) {
        cfg = preset(preset_name);
        if (!file_text.empty()) cfg.apply_overrides(file_text);
    } else if (!file_text.empty()) {
        cfg = ExperimentConfig::from_json_with_preset(file_text);
    } else {
        throw validation_error("either --preset or --config is required");
    }
    if (n_poles_override > 0) cfg.n_poles = n_poles_override;
    cfg.validate();
    return cfg;
}

int run_verify();

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonance-expansion time evolution of decaying particles (hbar = 2m = 1)"};
    app.require_subcommand(1);

    std::string preset_name, config_path, out_dir = "out", cache_dir = "qdecay-cache";
    int n_poles = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--preset", preset_name, "built-in experiment: fig1..fig6");
        sub->add_option("--config", config_path, "JSON config file (fields override the preset)");
        sub->add_option("--n-poles", n_poles, "override pole count");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--cache", cache_dir, "pole cache directory");
    };

    CLI::App* cmd_poles = app.add_subcommand("poles", "solve and cache the resonance poles");
    CLI::App* cmd_run = app.add_subcommand("run", "run an experiment, write series/summary/plot");
    CLI::App* cmd_verify = app.add_subcommand("verify", "independent-oracle verification suite");
    CLI::App* cmd_sumrule = app.add_subcommand("sumrule", "sum-rule convergence and coefficient table");
    add_common(cmd_poles);
    add_common(cmd_run);
    add_common(cmd_sumrule);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_poles->parsed()) {
            ExperimentConfig cfg = resolve_config(preset_name, config_path, n_poles);
            PoleSet set = solve_poles_cached(cfg.potential, cfg.n_poles, cache_dir);
            std::printf("%d poles for %s (cache: %s)\n", set.count(),
                        cfg.potential.fingerprint().c_str(), cache_dir.c_str());
            for (int n = 1; n <= std::min(6, set.count()); ++n)
                std::printf("  n=%d  kappa = %.9g %+.9gi  tau = %.8g\n", n,
                            set[n].kappa.real(), set[n].kappa.imag(), set[n].lifetime());
            if (cfg.potential.kind == PotentialKind::DoubleBarrier)
                std::printf("  below barrier: %d\n", set.below_barrier_count());
        } else if (cmd_run->parsed()) {
            ExperimentConfig cfg = resolve_config(preset_name, config_path, n_poles);
            ExperimentResult res = run_experiment(cfg, out_dir, cache_dir);
            std::printf("wrote %s\n", res.series_csv.string().c_str());
            std::ifstream is(res.summary_txt);
            std::cout << is.rdbuf();
        } else if (cmd_sumrule->parsed()) {
            ExperimentConfig cfg = resolve_config(preset_name, config_path, n_poles);
            PoleSet set = solve_poles_cached(cfg.potential, cfg.n_poles, cache_dir);
            Expansion e = Expansion::build(cfg.potential, set, cfg.initial_states());
            std::filesystem::create_directories(out_dir);
            for (int s = 0; s < e.label_count(); ++s) {
                const double total = sum_rule(e, s, e.truncation());
                std::printf("label %s (q=%d): Re sum C Cbar over %d poles = %.10f\n",
                            s == 0 ? "alpha" : "beta", e.labels[s].q, e.truncation(), total);
                const auto path = std::filesystem::path(out_dir) /
                                  (cfg.name + "_coefficients_" + (s == 0 ? "alpha" : "beta") + ".csv");
                std::ofstream os(path);
                export_coefficients(e, s, os);
                std::printf("  coefficient table: %s\n", path.string().c_str());
            }
        } else if (cmd_verify->parsed()) {
            return run_verify();
        }
    } catch (const validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}

namespace {

int run_verify() {
    int failures = 0;
    auto report = [&](const char* name, bool ok, double observed, double bound) {
        std::printf("%-52s %s   (observed %.3g, bound %.3g)\n", name, ok ? "PASS" : "FAIL",
                    observed, bound);
        if (!ok) ++failures;
    };

    // Faddeeva identities, sampled where the identity is well conditioned
    // (Im z >= |Re z|, so 2 e^{-z^2} is not exponentially below w)
    {
        double worst = 0.0;
        srand48(12345);
        for (int i = 0; i < 200; ++i) {
            const double x = drand48() * 6.0 - 3.0;
            const double y = std::abs(x) + drand48() * 3.0;
            const cplx z(x, y);
            const cplx lhs = faddeeva_w(z) + faddeeva_w(-z);
            const cplx rhs = 2.0 * std::exp(-z * z);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        report("faddeeva reflection identity", worst < 1e-12, worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double x = drand48() * 5.0;
            worst = std::max(worst,
                             std::abs(faddeeva_w(cplx(x, 0)).real() - std::exp(-x * x)));
        }
        report("faddeeva real-axis Re w = exp(-x^2)", worst < 1e-13, worst, 1e-13);
    }

    // Moshinsky vs contour quadrature
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double rho = drand48() * 4.0;
            const double t = 0.2 + drand48() * 2.0;
            const cplx k(0.5 + drand48() * 3.0, -(0.01 + drand48() * 0.4));
            if (std::arg(k) <= -M_PI / 4 + 0.05) continue;
            const cplx a = moshinsky_m(rho, 0.0, t, k);
            const cplx b = moshinsky_m_quadrature(rho, 0.0, t, k);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
        report("moshinsky vs rotated-contour quadrature", worst < 1e-8, worst, 1e-8);
    }

    // states: normalization and coefficient against quadrature
    {
        const auto spec = PotentialSpec::delta_shell(100.0, 1.0);
        const auto set = find_poles(spec, 4);
        const auto st = normalize_state(spec, set[1]);
        auto u = [&](double x) { return st.u_value(x); };
        const cplx I = quad_overlap(u, u, 0.0, spec.a, 1e-13) +
                       cplx(0, 1) * st.u_boundary * st.u_boundary / (2.0 * set[1].kappa);
        const double err = std::abs(I - 1.0);
        report("resonance-state normalization (quadrature)", err < 1e-10, err, 1e-10);

        const auto init = InitialState::box_mode(1, 0.0, spec.a);
        const cplx c_closed = coefficient(st, init);
        const cplx c_quad = quad_overlap(
            [&](double x) { return cplx(initial_state_value(init, x)); }, u, 0.0, spec.a, 1e-13);
        const double cerr = std::abs(c_closed - c_quad);
        report("coefficient closed form vs quadrature", cerr < 1e-12, cerr, 1e-12);
    }

    // Crank-Nicolson: free Gaussian density and unitarity
    {
        TdseParams p;
        p.h = 0.005;
        p.dt = 1e-4;
        p.x_max = 40.0;
        p.absorber = false;
        const int n = static_cast<int>(std::lround(p.x_max / p.h)) - 1;
        std::vector<double> V(n, 0.0);
        std::vector<cplx> psi0(n);
        const double x0 = 20.0, sigma = 1.5, k0 = 0.5;
        for (int j = 0; j < n; ++j) {
            const double x = (j + 1) * p.h;
            psi0[j] = std::pow(2 * M_PI * sigma * sigma, -0.25) *
                      std::exp(cplx(-(x - x0) * (x - x0) / (4 * sigma * sigma), k0 * x));
        }
        const double t_end = 1.0;
        GridState g = tdse_evolve_raw(V, psi0, t_end, p);
        // |psi|^2 = (2 pi sigma_t^2)^{-1/2} exp(-(x - x0 - 2 k0 t)^2 / (2 sigma_t^2)),
        // sigma_t^2 = sigma^2 + t^2/sigma^2   (hbar = 2m = 1)
        const double st2 = sigma * sigma + t_end * t_end / (sigma * sigma);
        double worst = 0.0;
        for (double x : {17.0, 19.0, 21.0, 23.0, 25.0}) {
            const double X = x - x0 - 2 * k0 * t_end;
            const double exact = std::exp(-X * X / (2 * st2)) / std::sqrt(2 * M_PI * st2);
            worst = std::max(worst, std::abs(std::norm(g.value_at(x)) - exact) / exact);
        }
        report("free Gaussian density vs closed form", worst < 1e-4, worst, 1e-4);
        report("norm preservation (no absorber)", std::abs(g.norm() - 1.0) < 1e-10,
               std::abs(g.norm() - 1.0), 1e-10);
    }
    std::printf("%s\n", failures == 0 ? "verification suite: all PASS" : "verification suite: FAILURES");
    return failures == 0 ? 0 : 3;
}

} // namespace
