#pragma once

#include <filesystem>
#include <optional>

#include "qdecay/dynamics.hpp"

namespace qdecay {

// One reproducible run: potential, initial labels, symmetry, positions,
// time grid, truncation. Presets fig1..fig6 encode the reference figures.
struct ExperimentConfig {
    std::string name = "custom";
    PotentialSpec potential;
    int alpha_q = 1;
    std::optional<int> beta_q;
    Symmetry symmetry = Symmetry::Single;
    std::vector<double> positions;  // 1 or 2 coordinates
    TimeGrid time_grid;
    int n_poles = 0;
    bool tail_completion = false;

    void validate() const;
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    // preset patched field-by-field with keys present in the JSON object
    static ExperimentConfig from_json_with_preset(const std::string& text);
    // apply the JSON object's fields on top of an existing config
    void apply_overrides(const std::string& text);

    std::vector<InitialState> initial_states() const;
};

bool is_preset_name(const std::string& name);
ExperimentConfig preset(const std::string& name);

struct ExperimentResult {
    ExperimentConfig config;
    DensitySeries series;
    PoleSet poles;
    double lifetime = 0.0;
    std::vector<double> predicted_peaks_lifetimes;  // (r - boundary)/(2 v_n) / tau
    double measured_global_peak_lifetimes = 0.0;
    std::vector<double> measured_peaks_lifetimes;   // prominent maxima
    std::optional<double> tail_slope;               // only for log grids past the transition
    std::filesystem::path series_csv, summary_txt, plot_gp;
};

// Solve (or load) the pole cache for the spec under cache_dir.
PoleSet solve_poles_cached(const PotentialSpec& spec, int N,
                           const std::filesystem::path& cache_dir);

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                const std::filesystem::path& cache_dir);

} // namespace qdecay
