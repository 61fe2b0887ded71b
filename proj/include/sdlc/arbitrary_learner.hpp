#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdlc/dataset.hpp"
#include "sdlc/forster.hpp"
#include "sdlc/protocol.hpp"
#include "sdlc/rng.hpp"

namespace sdlc {

enum class Termination { coverage, budget, aborted };
std::string to_string(Termination t);

struct WeakConfig {
    // RIP target handed to the Forster step; 1/(2d) when absent.
    std::optional<double> forster_delta;
    // Abort the attempt once its mistakes exceed this cap.
    std::optional<std::size_t> mistake_cap;
    // Instrumentation only: enables initial_correlation_ok.
    const Vector* ground_truth = nullptr;
};

struct WeakRunResult {
    std::vector<std::pair<std::size_t, int>> labeled_set; // C of the final sweep, dataset indices
    std::vector<std::size_t> revealed;                    // every index predicted during the run
    std::size_t mistakes = 0;
    Termination terminated_by = Termination::budget;
    std::size_t k = 0;         // working dimension
    std::size_t U_size = 0;    // |X cap V|
    std::size_t sweeps = 0;
    std::size_t sweep_budget = 0;
    bool initial_correlation_ok = false;
    // Mistakes below 1/(2 sqrt k) |w| in a sweep that then failed the coverage test.
    std::size_t soft_margin_violations = 0;
};

/// max(1, ceil(5 k ln k))
std::size_t weak_sweep_budget(std::size_t k);
/// floor(5 k ln k) + 1
std::size_t weak_mistake_bound(std::size_t k);

/// Weak learner on the points `X` (dataset indices not yet predicted).
/// Already revealed labels are never re-predicted: when a sweep meets one, the
/// known label is used, and a disagreement updates the hypothesis at no cost.
WeakRunResult weak_run(const std::vector<Vector>& points, std::span<const std::size_t> X, LabelOracle& oracle,
                       RngStream& rng, const WeakConfig& cfg = {});

struct BoostBudget {
    double eps = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double c = 0.0;
    std::size_t runs_outer = 1;
    std::size_t retries_per_round = 1;
    std::size_t per_run_mistakes = 1;
    std::size_t mistake_cap = 1;
};

/// runs_outer = ceil(ln(1/eps)/ln(1/alpha)), retries = ceil(ln(runs_outer/delta)/c),
/// both at least 1; mistake_cap = retries * runs_outer * weak_mistake_bound(d).
BoostBudget compute_boost_budget(std::size_t d, double eps, double delta, double c_hat, double alpha_hat);

struct StrongConfig {
    double eps = 0.01;
    double delta = 0.1;
    double c_hat = 0.3;
    std::optional<double> alpha_hat; // 1 - 1/(4d) when absent
    const Vector* ground_truth = nullptr;
};

struct RoundSummary {
    std::size_t attempt;
    std::size_t remaining_before;
    std::size_t revealed;
    std::size_t mistakes;
    std::size_t k;
    Termination terminated_by;
};

struct StrongRunResult {
    Transcript transcript;
    BoostBudget budget;
    std::size_t rounds = 0;   // attempts that ended by coverage
    std::size_t attempts = 0;
    std::size_t covered = 0;
    bool partial = false;     // stopped before reaching (1 - eps) n
    bool forster_failed = false;
    std::vector<RoundSummary> log;
};

/// Weak runs on the shrinking unlabeled set until at most eps n points remain
/// or the attempt/mistake budget is spent.
StrongRunResult strong_run(const LabeledDataset& ds, RngStream& rng, const StrongConfig& cfg = {});

} // namespace sdlc
