#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sdlc/geometry.hpp"
#include "sdlc/rng.hpp"

namespace sdlc {

struct TailCheckResult {
    double empirical_prob = 0.0;
    double analytic_bound = 0.0;
    std::size_t trials = 0;
    double std_err = 0.0; // binomial standard error of empirical_prob
    bool pass = false;    // empirical_prob <= analytic_bound + 3 std_err
};

TailCheckResult tail_result(std::size_t hits, std::size_t trials, double bound);

struct MassCheckResult {
    double mean_count = 0.0;
    double expected_count = 0.0; // n theta / pi
    double std_err = 0.0;        // of mean_count
    bool mean_pass = false;      // |mean - n theta/pi| <= 3 std_err
    double tail_threshold = 0.0; // n p + sqrt(2 p n ln(1/0.01)), p = theta/pi
    TailCheckResult tail;        // Pr[count > threshold] vs 0.01
    bool pass() const noexcept { return mean_pass && tail.pass; }
};

/// Counts of n sphere samples in the disagreement region of two random unit
/// vectors at angle theta, over `trials` independent trials.
MassCheckResult mc_disagreement_mass(std::size_t d, double theta, std::size_t n, std::size_t trials, RngStream& rng);

/// Max margin |u.x| of m samples from S_d conditioned (by rejection) on the
/// disagreement region of u, v at angle theta.
///   case 1: threshold alpha sin(theta/2), bound exp(-m (1-alpha^2)^{d/2-1} / 2)
///   case 2: threshold (1-beta) sin(theta), bound exp(-m (beta/2)^{d/2} / 2)
TailCheckResult mc_max_margin_tail(std::size_t d, double theta, std::size_t m, double alpha_or_beta, int tail_case,
                                   std::size_t trials, RngStream& rng);

/// Case-1 constant: the smallest c >= 2 with e^{-dc/4} <= 4 pi s/(n theta).
double region_tail_default_c(std::size_t d, double theta, std::size_t n, double s);

/// Margin threshold of the chosen case (throws RegimeError outside its regime).
double region_tail_threshold(std::size_t d, double theta, std::size_t n, double s, int tail_case,
                         std::optional<double> c = std::nullopt);

/// Max of |u.x| over the n unconditioned samples that fall in the disagreement
/// region, compared against 2 e^{-s/2}.
TailCheckResult mc_region_max_margin(std::size_t d, double theta, std::size_t n, double s, int tail_case,
                                      std::size_t trials, RngStream& rng, std::optional<double> c = std::nullopt);

/// ceil((3/2)((1/rho) max(ln ln(1/kappa), ln ln(M+1)) + ln(e/delta)))
std::size_t superlinear_horizon(double rho, double kappa, double M, double delta);

/// The slowest process allowed: xi <- min(xi, xi^{1-rho} kappa^rho) on a decay step.
/// With p_decay = 1 this is deterministic; returns xi_0..xi_steps.
std::vector<double> superlinear_trajectory(double rho, double kappa, double xi0, std::size_t steps);

/// Pr[xi_T > e^2 kappa] at T = superlinear_horizon(...), compared against delta.
TailCheckResult simulate_superlinear(double rho, double kappa, double M, double p_decay, double delta,
                                     std::size_t trials, RngStream& rng, std::optional<double> xi0 = std::nullopt);

struct UpdateCountTrial {
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t updates = 0;
    std::size_t bound = 0; // ceil((2/beta^2) ln(1/alpha))
};

/// One synthetic margin-perceptron sequence in R^d: every step uses a point
/// with |x.w| >= beta |w| on which w and w* disagree, until none exists.
UpdateCountTrial update_count_trial(std::size_t d, RngStream& rng);

} // namespace sdlc
