#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "itolab/clark.hpp"
#include "itolab/functional.hpp"
#include "itolab/model.hpp"
#include "itolab/schedule.hpp"

namespace itolab {

/// Parsed experiment description. The config format is flat key = value
/// lines grouped into [section]s; unknown keys are rejected by name. A
/// seed is mandatory: there are no wall-clock defaults anywhere.
struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 0;
    std::string out_dir = "itolab_out";
    unsigned threads = 1;

    // [grid]
    double horizon = 1.0;
    std::size_t nodes = 1025;

    // [model]
    double sigma = 1.0;
    double sigma_slope = 0.0;
    double sigma_feedback = 0.0;
    double lambda = 0.0;
    std::string law = "uniform";
    double law_a = -1.0;
    double law_b = 1.0;
    double law_c = 0.5;
    double law_sd = 0.5;
    double law_xmax = 1.0;
    double gamma = 1.0;
    double gamma_slope = 0.0;
    double drift_slope = 0.0;
    std::vector<std::pair<double, double>> drift_atoms;
    double weierstrass_amp = 0.0;
    std::size_t weierstrass_terms = 12;
    double x0 = 0.0;
    double t0 = 0.0;

    // [functional]
    std::string functional_kind = "markovian";
    std::string functional_f = "square";
    std::string functional_g = "tanh";
    double functional_value = 0.0;
    double mu_density = 1.0;
    std::vector<std::pair<double, double>> mu_atoms;

    // [schedule]
    int k_min = 3;
    int k_max = 9;
    std::vector<double> eps_values;  // explicit override

    // [budgets]
    std::size_t paths = 100;
    std::size_t inner = 2000;
    std::size_t outer = 2000;
    std::uint64_t nested_cap = (1ull << 33);
    std::size_t compensator_subsample = 128;
    std::size_t samples = 32;      // regularity-probe pairs
    std::size_t dump_paths = 2;    // per-path report CSVs to emit

    TimeGrid grid() const { return TimeGrid(horizon, nodes); }
    JumpDiffusionSpec model() const;
    std::unique_ptr<PathFunctional> functional(const TimeGrid& grid) const;
    MuMeasure mu(const TimeGrid& grid) const;
    EpsSchedule schedule(const TimeGrid& grid) const;
    ClarkSpec clark(const TimeGrid& grid) const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& filename);

/// Structural validation beyond parsing: known experiment kind, catalog
/// names, budgets within hard caps. Throws invalid_input naming the
/// offending key.
void validate_config(const ExperimentConfig& config);

/// FNV-1a over the canonical serialization (seed included; out_dir and
/// threads excluded so reruns at any thread count byte-match).
std::uint64_t config_hash(const ExperimentConfig& config);

/// Runs the experiment and writes its CSV artifacts plus manifest.txt
/// into out_dir. Identical configs produce byte-identical files.
void run_experiment(const ExperimentConfig& config);

std::string catalog_text();

const std::vector<std::string>& experiment_kinds();

}  // namespace itolab
