#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdecay/errors.hpp"
#include "qdecay/experiment.hpp"

using namespace qdecay;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir(const char* tag) : path(fs::temp_directory_path() / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("presets encode the reference parameters") {
    const auto f1 = preset("fig1");
    CHECK(f1.potential.kind == PotentialKind::DeltaShell);
    CHECK(f1.potential.lambda == 100.0);
    CHECK(f1.potential.a == 1.0);
    CHECK(f1.alpha_q == 1);
    CHECK(f1.positions == std::vector<double>{3000.0});
    CHECK(f1.n_poles == 1000);

    const auto f2 = preset("fig2");
    CHECK(f2.alpha_q == 1);
    CHECK(*f2.beta_q == 6);
    CHECK(f2.positions == std::vector<double>{2400.0, 15000.0});

    const auto f3 = preset("fig3");
    CHECK(f3.n_poles == 1);
    CHECK(f3.symmetry == Symmetry::Factorized);
    CHECK(f3.positions == std::vector<double>{3000.0, 15000.0});
    CHECK(preset("fig4").n_poles == 1000);

    const auto f5 = preset("fig5");
    CHECK(f5.potential.kind == PotentialKind::DoubleBarrier);
    CHECK(f5.potential.V == 40.0);
    CHECK(f5.potential.b == 1.0);
    CHECK(f5.potential.w == 1.0);
    CHECK(f5.n_poles == 2);
    CHECK(f5.positions == std::vector<double>{600000.0, 3000000.0});
    CHECK(preset("fig6").n_poles == 50);
    CHECK_THROWS_AS(preset("fig9"), validation_error);
}

TEST_CASE("config JSON round trip is the identity") {
    ExperimentConfig c = preset("fig2");
    const std::string once = c.to_json();
    const ExperimentConfig back = ExperimentConfig::from_json(once);
    CHECK(back.to_json() == once);
}

TEST_CASE("preset overridable field by field") {
    ExperimentConfig c = preset("fig4");
    c.apply_overrides(R"({"n_poles": 123, "positions": [700.0, 1400.0]})");
    CHECK(c.n_poles == 123);
    CHECK(c.positions == std::vector<double>{700.0, 1400.0});
    CHECK(c.potential.lambda == 100.0);  // untouched preset fields survive
    CHECK(c.symmetry == Symmetry::Factorized);
}

TEST_CASE("invalid configs are rejected") {
    ExperimentConfig c = preset("fig1");
    c.n_poles = 0;
    CHECK_THROWS_AS(c.validate(), validation_error);
    c = preset("fig1");
    c.positions = {10.0, 20.0};
    CHECK_THROWS_AS(c.validate(), validation_error);  // single takes one position
    c = preset("fig2");
    c.beta_q.reset();
    CHECK_THROWS_AS(c.validate(), validation_error);
}

TEST_CASE("pole cache on disk: hit, determinism, stale rejection") {
    TempDir dir("qdecay-test-cache");
    const auto spec = PotentialSpec::delta_shell(100.0, 1.0);
    const PoleSet a = solve_poles_cached(spec, 8, dir.path);
    REQUIRE(fs::exists(dir.path));
    fs::path cache_file;
    for (const auto& ent : fs::directory_iterator(dir.path)) cache_file = ent.path();
    const std::string bytes1 = slurp(cache_file);
    const PoleSet b = solve_poles_cached(spec, 8, dir.path);  // cache hit
    CHECK(slurp(cache_file) == bytes1);
    for (int n = 1; n <= 8; ++n) CHECK(a[n].kappa == b[n].kappa);
    // asking for more poles re-solves and extends the cache
    const PoleSet c = solve_poles_cached(spec, 12, dir.path);
    CHECK(c.count() == 12);
}

TEST_CASE("run_experiment writes series, summary, plot; deterministic bytes") {
    TempDir out("qdecay-test-out");
    TempDir cache("qdecay-test-cache2");
    ExperimentConfig cfg = preset("fig5");
    cfg.time_grid.points = 300;  // keep the smoke test light
    const ExperimentResult r1 = run_experiment(cfg, out.path, cache.path);
    CHECK(fs::exists(r1.series_csv));
    CHECK(fs::exists(r1.summary_txt));
    CHECK(fs::exists(r1.plot_gp));
    CHECK(std::abs(r1.lifetime - 18067.23) / 18067.23 < 5e-3);
    CHECK(r1.poles.below_barrier_count() == 2);
    // global max near 7 lifetimes
    CHECK(std::abs(r1.measured_global_peak_lifetimes - 7.0) < 0.2);
    const std::string bytes1 = slurp(r1.series_csv);
    const ExperimentResult r2 = run_experiment(cfg, out.path, cache.path);
    CHECK(slurp(r2.series_csv) == bytes1);
    // summary mentions the pole table and units
    const std::string summary = slurp(r1.summary_txt);
    CHECK(summary.find("hbar = 2m = 1") != std::string::npos);
    CHECK(summary.find("below barrier") != std::string::npos);
}
