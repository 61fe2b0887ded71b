#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdlc/dataset.hpp"
#include "sdlc/suite.hpp"

namespace sdlc {

enum class Mode { sphere, arbitrary, baseline, verify };
Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

struct ExperimentConfig {
    Mode mode = Mode::sphere;
    std::vector<std::size_t> d_values{10};
    std::vector<std::size_t> n_values{1000};
    std::vector<std::uint64_t> seeds{1};
    double delta = 0.1;
    double eps = 0.01;
    double c_prime = 4.0;
    double c_init = 10.0;
    double c_hat = 0.3;
    std::optional<double> alpha_hat;
    Family family = Family::clustered;
    FamilyParams family_params;
    bool baseline_init = true;
    // Trial-count multiplier for the verify grid (1 = acceptance scale).
    double verify_scale = 1.0;
    std::size_t threads = 0; // 0: hardware concurrency
    std::optional<std::filesystem::path> out;

    /// Throws InvalidArgument on an empty grid, repeated seeds or probabilities outside (0,1).
    void validate() const;
};

/// Reads the JSON config document; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct RunRecord {
    Mode mode;
    std::size_t d, n;
    std::uint64_t seed;
    std::size_t mistakes = 0;
    double coverage = 0.0;
    double runtime_ms = 0.0;
    std::optional<std::string> error;
};

struct LinearFit {
    double a = 0.0, b = 0.0, r2 = 0.0;
};

struct ScalingFit {
    LinearFit ln;   // M = a + b ln n
    LinearFit lnln; // M = a' + b' ln ln n
};

/// Least squares in both bases over (n, mistakes) points. Needs >= 3 distinct
/// n, all > 1. R^2 of a zero-variance target is defined as 1.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

struct CellSummary {
    Mode mode;
    std::size_t d, n;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double mean_mistakes = 0.0;
    double median_mistakes = 0.0;
    double stderr_mistakes = 0.0;
    double mean_coverage = 0.0;
    double mean_runtime_ms = 0.0;
};

struct Report {
    Mode mode;
    std::vector<CellSummary> cells;
    std::vector<RunRecord> runs;
    // Per d, when the grid has >= 3 n values.
    std::vector<std::pair<std::size_t, ScalingFit>> fits;
    std::vector<OracleEntry> oracles;
    bool all_pass() const;
};

/// Executes every (cell, seed) pair on a worker pool. Cell failures are
/// recorded and the run continues.
Report run_experiment(const ExperimentConfig& cfg);

/// One run of a (mode, d, n, seed) cell. Datasets depend only on (d, n, seed),
/// so sphere and baseline runs with equal seeds see identical data.
RunRecord run_cell(const ExperimentConfig& cfg, std::size_t d, std::size_t n, std::uint64_t seed);

/// The oracle grid behind `verify`.
std::vector<OracleEntry> run_oracle_suite(std::uint64_t seed, double scale);

nlohmann::json report_to_json(const Report& r, bool include_runtime = true);
void write_report(const Report& r, const std::filesystem::path& json_path);
void write_runs_csv(const Report& r, const std::filesystem::path& csv_path);

} // namespace sdlc
