#include "qdecay/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdecay/errors.hpp"

namespace qdecay {

using nlohmann::json;

namespace {

json potential_to_json(const PotentialSpec& p) {
    if (p.kind == PotentialKind::DeltaShell)
        return {{"kind", "delta_shell"}, {"lambda", p.lambda}, {"a", p.a}};
    return {{"kind", "double_barrier"}, {"V", p.V}, {"b", p.b}, {"w", p.w}};
}

PotentialSpec potential_from_json(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "delta_shell")
        return PotentialSpec::delta_shell(j.at("lambda"), j.at("a"));
    if (kind == "double_barrier")
        return PotentialSpec::double_barrier(j.at("V"), j.at("b"), j.at("w"));
    throw validation_error("config: unknown potential kind '" + kind + "'");
}

Symmetry symmetry_from_string(const std::string& s) {
    if (s == "single") return Symmetry::Single;
    if (s == "factorized") return Symmetry::Factorized;
    if (s == "symmetric") return Symmetry::Symmetric;
    if (s == "antisymmetric") return Symmetry::Antisymmetric;
    throw validation_error("config: unknown symmetry '" + s + "'");
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.name;
    j["potential"] = potential_to_json(c.potential);
    j["alpha_q"] = c.alpha_q;
    if (c.beta_q) j["beta_q"] = *c.beta_q;
    j["symmetry"] = to_string(c.symmetry);
    j["positions"] = c.positions;
    j["time_grid"] = {{"scale", c.time_grid.log_spaced ? "log" : "linear"},
                      {"start", c.time_grid.start},
                      {"stop", c.time_grid.stop},
                      {"points", c.time_grid.points},
                      {"unit", c.time_grid.lifetime_units ? "lifetime" : "absolute"}};
    j["n_poles"] = c.n_poles;
    j["tail_completion"] = c.tail_completion;
    return j;
}

void apply_json(ExperimentConfig& c, const json& j) {
    if (j.contains("experiment")) c.name = j["experiment"];
    if (j.contains("potential")) c.potential = potential_from_json(j["potential"]);
    if (j.contains("alpha_q")) c.alpha_q = j["alpha_q"];
    if (j.contains("beta_q")) c.beta_q = j["beta_q"].get<int>();
    if (j.contains("symmetry")) c.symmetry = symmetry_from_string(j["symmetry"]);
    if (j.contains("positions")) c.positions = j["positions"].get<std::vector<double>>();
    if (j.contains("time_grid")) {
        const json& g = j["time_grid"];
        if (g.contains("scale")) c.time_grid.log_spaced = g["scale"] == "log";
        if (g.contains("start")) c.time_grid.start = g["start"];
        if (g.contains("stop")) c.time_grid.stop = g["stop"];
        if (g.contains("points")) c.time_grid.points = g["points"];
        if (g.contains("unit")) c.time_grid.lifetime_units = g["unit"] == "lifetime";
    }
    if (j.contains("n_poles")) c.n_poles = j["n_poles"];
    if (j.contains("tail_completion")) c.tail_completion = j["tail_completion"];
}

} // namespace

void ExperimentConfig::validate() const {
    potential.validate();
    if (n_poles < 1) throw validation_error("config: n_poles must be >= 1");
    if (positions.empty() || positions.size() > 2)
        throw validation_error("config: need 1 or 2 positions");
    if (symmetry == Symmetry::Single && positions.size() != 1)
        throw validation_error("config: single-particle runs take exactly 1 position");
    if (symmetry != Symmetry::Single && positions.size() != 2)
        throw validation_error("config: two-particle runs take exactly 2 positions");
    if ((symmetry == Symmetry::Symmetric || symmetry == Symmetry::Antisymmetric) && !beta_q)
        throw validation_error("config: entangled symmetries need beta_q");
    if (time_grid.points < 2 || !(time_grid.stop > time_grid.start) || !(time_grid.start > 0))
        throw validation_error("config: bad time grid");
}

std::vector<InitialState> ExperimentConfig::initial_states() const {
    double x0, x1;
    if (potential.kind == PotentialKind::DeltaShell) {
        x0 = 0.0;
        x1 = potential.a;
    } else {
        x0 = potential.b;
        x1 = potential.b + potential.w;
    }
    std::vector<InitialState> out{InitialState::box_mode(alpha_q, x0, x1)};
    if (beta_q) out.push_back(InitialState::box_mode(*beta_q, x0, x1));
    return out;
}

std::string ExperimentConfig::to_json() const { return config_to_json(*this).dump(2); }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    ExperimentConfig c;
    c.potential = PotentialSpec::delta_shell(1.0, 1.0);  // placeholder, overwritten
    apply_json(c, json::parse(text));
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_with_preset(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig c;
    if (j.contains("experiment") && is_preset_name(j["experiment"])) {
        c = preset(j["experiment"]);
    } else {
        c.potential = PotentialSpec::delta_shell(1.0, 1.0);
    }
    apply_json(c, j);
    c.validate();
    return c;
}

void ExperimentConfig::apply_overrides(const std::string& text) {
    apply_json(*this, json::parse(text));
    validate();
}

bool is_preset_name(const std::string& name) {
    return name == "fig1" || name == "fig2" || name == "fig3" || name == "fig4" ||
           name == "fig5" || name == "fig6";
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    if (name == "fig1") {
        c.potential = PotentialSpec::delta_shell(100.0, 1.0);
        c.alpha_q = 1;
        c.symmetry = Symmetry::Single;
        c.positions = {3000.0};
        c.time_grid = {false, 0.02, 60.0, 3000, true};
        c.n_poles = 1000;
    } else if (name == "fig2") {
        c.potential = PotentialSpec::delta_shell(100.0, 1.0);
        c.alpha_q = 1;
        c.beta_q = 6;
        c.symmetry = Symmetry::Symmetric;
        c.positions = {2400.0, 15000.0};
        c.time_grid = {false, 0.05, 30.0, 1500, true};
        c.n_poles = 1000;
    } else if (name == "fig3" || name == "fig4") {
        c.potential = PotentialSpec::delta_shell(100.0, 1.0);
        c.alpha_q = 1;
        c.symmetry = Symmetry::Factorized;
        c.positions = {3000.0, 15000.0};
        c.time_grid = {false, 0.02, 40.0, 2400, true};
        c.n_poles = name == "fig3" ? 1 : 1000;
    } else if (name == "fig5" || name == "fig6") {
        c.potential = PotentialSpec::double_barrier(40.0, 1.0, 1.0);
        c.alpha_q = 1;
        c.symmetry = Symmetry::Factorized;
        c.positions = {600000.0, 3000000.0};
        c.time_grid = {false, 0.5, 45.0, 1800, true};
        c.n_poles = name == "fig5" ? 2 : 50;
    } else {
        throw validation_error("unknown preset '" + name + "'");
    }
    return c;
}

namespace {

std::string cache_file_name(const PotentialSpec& spec) {
    // FNV-1a over the fingerprint
    const std::string fp = spec.fingerprint();
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char ch : fp) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "poles_%016llx.csv", h);
    return buf;
}

} // namespace

PoleSet solve_poles_cached(const PotentialSpec& spec, int N,
                           const std::filesystem::path& cache_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(cache_dir);
    const fs::path file = cache_dir / cache_file_name(spec);
    if (fs::exists(file)) {
        std::ifstream is(file);
        try {
            PoleSet cached = load_pole_cache(spec, is);
            if (cached.count() >= N) {
                cached.poles.resize(N);
                return cached;
            }
        } catch (const std::exception&) {
            // stale or mismatched cache: fall through to a fresh solve
        }
    }
    PoleSet fresh = find_poles(spec, N);
    std::ofstream os(file);
    save_pole_cache(fresh, os);
    return fresh;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                const std::filesystem::path& cache_dir) {
    namespace fs = std::filesystem;
    config.validate();
    fs::create_directories(out_dir);

    ExperimentResult res;
    res.config = config;
    res.poles = solve_poles_cached(config.potential, config.n_poles, cache_dir);
    res.lifetime = res.poles.lifetime();

    Expansion e = Expansion::build(config.potential, res.poles, config.initial_states());
    EvalOptions opt;
    opt.tail_completion = config.tail_completion;

    std::optional<double> x2;
    if (config.positions.size() == 2) x2 = config.positions[1];
    res.series = density_series(e, config.positions[0], x2, config.symmetry,
                                config.time_grid, opt);

    const double tau = res.lifetime;
    const double boundary = config.potential.boundary();
    const int npred = std::min(res.poles.count(), 4);
    for (const double r : config.positions)
        for (int n = 1; n <= npred; ++n)
            res.predicted_peaks_lifetimes.push_back(peak_time(r, boundary, res.poles[n]) / tau);
    std::sort(res.predicted_peaks_lifetimes.begin(), res.predicted_peaks_lifetimes.end());

    res.measured_global_peak_lifetimes = res.series.t_lifetimes[res.series.global_max_index()];
    for (int i : prominent_maxima(res.series, 0.5, res.series.density.size() / 100))
        res.measured_peaks_lifetimes.push_back(res.series.t_lifetimes[i]);

    if (config.time_grid.log_spaced) {
        try {
            const double t_exp = exponential_regime_end(res.series);
            const double hi = res.series.t_abs.back();
            if (hi / (2.0 * t_exp) >= 10.0)
                res.tail_slope = tail_exponent(res.series, 2.0 * t_exp, hi);
        } catch (const std::exception&) {
            // leave unset; summary reports n/a
        }
    }

    res.series_csv = out_dir / (config.name + "_series.csv");
    res.summary_txt = out_dir / (config.name + "_summary.txt");
    res.plot_gp = out_dir / (config.name + "_plot.gp");

    {
        std::ofstream os(res.series_csv);
        os << "# natural units hbar = 2m = 1; " << config.potential.fingerprint()
           << "; symmetry=" << to_string(config.symmetry) << "; N=" << config.n_poles
           << "; lifetime_unit=" << tau << "\n";
        res.series.write_csv(os);
    }
    {
        std::ofstream os(res.plot_gp);
        os << "set datafile separator ','\n"
           << "set xlabel 't / tau'\nset ylabel 'ln |Psi|^2'\nset key off\n"
           << "plot '" << res.series_csv.filename().string()
           << "' every ::2 using 2:6 with lines\n";
    }
    {
        std::ofstream os(res.summary_txt);
        os << "experiment: " << config.name << "\n";
        os << "natural units: hbar = 2m = 1\n";
        os << "potential: " << config.potential.fingerprint() << "\n";
        os << "poles used: " << res.poles.count() << "\n";
        if (config.potential.kind == PotentialKind::DoubleBarrier)
            os << "poles below barrier (v < sqrt(V)): " << res.poles.below_barrier_count()
               << "\n";
        char buf[160];
        for (int n = 1; n <= std::min(4, res.poles.count()); ++n) {
            std::snprintf(buf, sizeof buf, "pole %d: kappa = %.9g %+.9gi  tau_n = %.8g\n", n,
                          res.poles[n].kappa.real(), res.poles[n].kappa.imag(),
                          res.poles[n].lifetime());
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "lifetime unit tau = %.9g\n", tau);
        os << buf;
        os << "predicted peak times (r - boundary)/(2 v_n), lifetimes:";
        for (double p : res.predicted_peaks_lifetimes) {
            std::snprintf(buf, sizeof buf, " %.4g", p);
            os << buf;
        }
        os << "\n";
        std::snprintf(buf, sizeof buf, "measured global maximum: %.6g lifetimes\n",
                      res.measured_global_peak_lifetimes);
        os << buf;
        os << "measured prominent maxima (lifetimes):";
        for (double p : res.measured_peaks_lifetimes) {
            std::snprintf(buf, sizeof buf, " %.4g", p);
            os << buf;
        }
        os << "\n";
        if (res.tail_slope) {
            std::snprintf(buf, sizeof buf, "tail exponent (ln rho vs ln t): %.4g\n",
                          *res.tail_slope);
            os << buf;
        } else {
            os << "tail exponent: n/a (grid not log-spaced past the exponential regime)\n";
        }
    }
    return res;
}

} // namespace qdecay
