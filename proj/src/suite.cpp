#include "sdlc/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sdlc/geometry.hpp"
#include "sdlc/margin_perceptron.hpp"
#include "sdlc/oracles.hpp"

namespace sdlc {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

OracleEntry from_tail(std::string name, const TailCheckResult& r) {
    return {std::move(name), r.pass, r.empirical_prob, r.analytic_bound,
            fmt("trials=%.0f std_err=%.3g", static_cast<double>(r.trials), r.std_err)};
}

} // namespace

DecayLawStats decay_law_trials(std::size_t triples, RngStream& rng) {
    DecayLawStats s;
    const double half_pi = std::numbers::pi / 2;
    for (std::size_t t = 0; t < triples; ++t) {
        RngStream r = rng.child(t);
        const std::size_t d = 2 + r.uniform_index(19);
        const Vector w_star = sample_sphere(d, r);
        const double theta = 0.01 + (half_pi - 0.02) * r.uniform();
        const double scale = std::exp(4.0 * r.uniform() - 2.0);
        const Vector w = scale * (std::cos(theta) * w_star + std::sin(theta) * sample_orthogonal(w_star, r));
        Vector x(d);
        do {
            x = sample_sphere(d, r);
        } while (!in_disagreement(x, w, w_star));

        const Hypothesis h(w);
        const Hypothesis h2 = mp_update(h, x);
        const double th = angle(w, w_star);
        const double r_val = std::abs(dot(w, x)) / (h.norm() * std::sin(th));
        const double tan_before = tan_theta(w, w_star);
        const double tan_after = tan_theta(h2.w(), w_star);
        const double excess = tan_after * tan_after - (1.0 - r_val * r_val) * tan_before * tan_before;
        s.worst_excess = std::max(s.worst_excess, excess);
        if (excess > 1e-9) ++s.decay_violations;
        // Relative slack of a few ulps for the monotonicity comparison.
        if (tan_after > tan_before * (1.0 + 1e-12)) ++s.monotone_violations;
        ++s.triples;
    }
    return s;
}

std::vector<OracleEntry> decay_law_entries(std::size_t triples, RngStream& rng) {
    const DecayLawStats s = decay_law_trials(triples, rng);
    const double n = static_cast<double>(s.triples);
    return {
        {"decay_law", s.decay_violations == 0, static_cast<double>(s.decay_violations) / n, 0.0,
         fmt("triples=%.0f worst_excess=%.3g", n, s.worst_excess)},
        {"tan_monotone", s.monotone_violations == 0, static_cast<double>(s.monotone_violations) / n, 0.0,
         fmt("triples=%.0f", n)},
    };
}

std::vector<OracleEntry> disagreement_mass_entries(std::size_t d, std::size_t n, std::size_t trials, RngStream& rng) {
    std::vector<OracleEntry> out;
    const double thetas[] = {0.1, std::numbers::pi / 4, std::numbers::pi / 2};
    for (std::size_t i = 0; i < 3; ++i) {
        RngStream r = rng.child(i);
        const MassCheckResult m = mc_disagreement_mass(d, thetas[i], n, trials, r);
        out.push_back({fmt("disagreement_mean theta=%.4f", thetas[i]), m.mean_pass, m.mean_count, m.expected_count,
                       fmt("std_err=%.3g", m.std_err)});
        out.push_back(from_tail(fmt("disagreement_tail theta=%.4f", thetas[i]), m.tail));
    }
    return out;
}

std::vector<OracleEntry> anti_concentration_entries(double scale, RngStream& rng) {
    struct Cell {
        std::size_t d;
        double theta;
        std::size_t m;
        double param;
        int tail_case;
        std::size_t trials;
    };
    const double pi = std::numbers::pi;
    const Cell conditional[] = {
        {3, pi / 2, 100, 0.5, 1, 2000}, {5, 0.3, 20, 0.9, 1, 2000}, {10, 1.0, 30, 0.6, 1, 2000},
        {4, 0.1, 10, 0.8, 1, 2000},     {3, 1.0, 50, 0.3, 2, 2000}, {4, 0.5, 40, 0.5, 2, 2000},
        {6, pi / 2, 200, 0.6, 2, 2000},
    };
    const Cell unconditioned[] = {
        {4, 0.5, 10000, 4.0, 1, 2000}, {4, 0.5, 10000, 4.0, 2, 1000},
        {3, 1.0, 5000, 6.0, 1, 1000},  {3, 1.0, 5000, 6.0, 2, 1000},
    };
    std::vector<OracleEntry> out;
    std::uint64_t label = 0;
    for (const Cell& c : conditional) {
        RngStream r = rng.child(label++);
        const auto trials = std::max<std::size_t>(10, static_cast<std::size_t>(static_cast<double>(c.trials) * scale));
        out.push_back(from_tail(fmt("max_margin_tail case=%.0f d=%.0f theta=%.3f m=%.0f", c.tail_case, c.d, c.theta, c.m) +
                                    fmt(" param=%.2f", c.param),
                                mc_max_margin_tail(c.d, c.theta, c.m, c.param, c.tail_case, trials, r)));
    }
    for (const Cell& c : unconditioned) {
        RngStream r = rng.child(label++);
        const auto trials = std::max<std::size_t>(10, static_cast<std::size_t>(static_cast<double>(c.trials) * scale));
        out.push_back(from_tail(fmt("region_max_margin case=%.0f d=%.0f theta=%.3f n=%.0f", c.tail_case, c.d, c.theta, c.m) +
                                    fmt(" s=%.1f", c.param),
                                mc_region_max_margin(c.d, c.theta, c.m, c.param, c.tail_case, trials, r)));
    }
    return out;
}

std::vector<OracleEntry> superlinear_entries(std::size_t trials, RngStream& rng) {
    std::vector<OracleEntry> out;
    RngStream r = rng.child(0);
    out.push_back(from_tail("superlinear rho=1/8 kappa=1e-6 M=1 p=2/3",
                            simulate_superlinear(0.125, 1e-6, 1.0, 2.0 / 3.0, 0.1, trials, r)));

    const auto traj = superlinear_trajectory(0.5, 0.01, 1.0, superlinear_horizon(0.5, 0.01, 1.0, 0.1));
    const bool steps_ok = std::abs(traj[1] - 0.1) <= 1e-12 && std::abs(traj[2] - std::pow(10.0, -1.5)) <= 1e-12;
    bool monotone = true;
    for (std::size_t i = 1; i < traj.size(); ++i) monotone = monotone && traj[i] <= traj[i - 1] && traj[i] >= 0.01 * (1 - 1e-12);
    const double target = std::exp(2.0) * 0.01;
    out.push_back({"superlinear_deterministic", steps_ok && monotone && traj.back() <= target, traj.back(), target,
                   fmt("xi1=%.6g xi2=%.6g T=%.0f", traj[1], traj[2], static_cast<double>(traj.size() - 1))});
    return out;
}

std::vector<OracleEntry> update_count_entries(std::size_t trials, RngStream& rng) {
    std::size_t violations = 0, total = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream r = rng.child(t);
        const std::size_t d = 2 + r.uniform_index(9);
        const UpdateCountTrial tr = update_count_trial(d, r);
        total += tr.updates;
        if (tr.updates > tr.bound) ++violations;
        worst = std::max(worst, static_cast<double>(tr.updates) / static_cast<double>(std::max<std::size_t>(tr.bound, 1)));
    }
    return {{"margin_update_count", violations == 0, static_cast<double>(violations), 0.0,
             fmt("trials=%.0f mean_updates=%.2f worst_ratio=%.3f", static_cast<double>(trials),
                 static_cast<double>(total) / static_cast<double>(trials), worst)}};
}

} // namespace sdlc
