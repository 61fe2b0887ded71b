#include "sdlc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sdlc/errors.hpp"

namespace sdlc {

TailCheckResult tail_result(std::size_t hits, std::size_t trials, double bound) {
    TailCheckResult r;
    r.trials = trials;
    r.analytic_bound = bound;
    r.empirical_prob = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    r.std_err = trials ? std::sqrt(r.empirical_prob * (1.0 - r.empirical_prob) / static_cast<double>(trials)) : 0.0;
    r.pass = r.empirical_prob <= r.analytic_bound + 3.0 * r.std_err;
    return r;
}

namespace {

constexpr double pi = std::numbers::pi;

void check_theta(double theta) {
    if (!(theta > 0.0 && theta < pi)) throw InvalidArgument("theta must lie in (0, pi)");
}

// u = e_2, v = -sin(theta) e_1 + cos(theta) e_2: the frame used for the margin oracles.
struct Pair {
    Vector u, v;
};

Pair canonical_pair(std::size_t d, double theta) {
    Pair p{Vector(d), Vector(d)};
    p.u[1] = 1.0;
    p.v[0] = -std::sin(theta);
    p.v[1] = std::cos(theta);
    return p;
}

} // namespace

MassCheckResult mc_disagreement_mass(std::size_t d, double theta, std::size_t n, std::size_t trials, RngStream& rng) {
    check_theta(theta);
    if (d < 2) throw InvalidArgument("mc_disagreement_mass: needs d >= 2");
    if (trials < 100) throw InvalidArgument("mc_disagreement_mass: needs at least 100 trials");
    if (n == 0) throw InvalidArgument("mc_disagreement_mass: n must be >= 1");

    const double p = theta / pi;
    MassCheckResult out;
    out.expected_count = static_cast<double>(n) * p;
    out.tail_threshold = out.expected_count + std::sqrt(2.0 * p * static_cast<double>(n) * std::log(1.0 / 0.01));

    double sum = 0.0, sum_sq = 0.0;
    std::size_t over = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream trial = rng.child(t);
        const Vector u = sample_sphere(d, trial);
        const Vector v = std::cos(theta) * u + std::sin(theta) * sample_orthogonal(u, trial);
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (in_disagreement(sample_sphere(d, trial), u, v)) ++count;
        const auto c = static_cast<double>(count);
        sum += c;
        sum_sq += c * c;
        if (c > out.tail_threshold) ++over;
    }
    const auto T = static_cast<double>(trials);
    out.mean_count = sum / T;
    const double var = std::max(sum_sq / T - out.mean_count * out.mean_count, 0.0) * T / (T - 1.0);
    out.std_err = std::sqrt(var / T);
    out.mean_pass = std::abs(out.mean_count - out.expected_count) <= 3.0 * out.std_err;
    out.tail = tail_result(over, trials, 0.01);
    return out;
}

TailCheckResult mc_max_margin_tail(std::size_t d, double theta, std::size_t m, double alpha_or_beta, int tail_case,
                                   std::size_t trials, RngStream& rng) {
    check_theta(theta);
    if (d < 3) throw InvalidArgument("mc_max_margin_tail: needs d >= 3");
    if (m == 0) throw InvalidArgument("mc_max_margin_tail: m must be >= 1");
    if (!(alpha_or_beta >= 0.0 && alpha_or_beta <= 1.0)) throw InvalidArgument("mc_max_margin_tail: parameter must lie in [0, 1]");
    if (tail_case != 1 && tail_case != 2) throw InvalidArgument("mc_max_margin_tail: case must be 1 or 2");
    if (theta < 1e-4) throw RegimeError("mc_max_margin_tail: rejection sampling infeasible for theta < 1e-4");

    const double dd = static_cast<double>(d);
    const double md = static_cast<double>(m);
    double threshold, bound;
    if (tail_case == 1) {
        threshold = alpha_or_beta * std::sin(theta / 2.0);
        bound = std::exp(-md * std::pow(1.0 - alpha_or_beta * alpha_or_beta, dd / 2.0 - 1.0) / 2.0);
    } else {
        threshold = (1.0 - alpha_or_beta) * std::sin(theta);
        bound = std::exp(-md * std::pow(alpha_or_beta / 2.0, dd / 2.0) / 2.0);
    }

    const Pair pr = canonical_pair(d, theta);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream trial = rng.child(t);
        double best = 0.0;
        for (std::size_t got = 0; got < m;) {
            const Vector x = sample_sphere(d, trial);
            if (!in_disagreement(x, pr.u, pr.v)) continue;
            ++got;
            best = std::max(best, std::abs(dot(pr.u, x)));
        }
        if (best <= threshold) ++hits;
    }
    return tail_result(hits, trials, bound);
}

double region_tail_default_c(std::size_t d, double theta, std::size_t n, double s) {
    const double ratio = static_cast<double>(n) * theta / (4.0 * pi * s);
    return std::max(2.0, 4.0 * std::log(ratio) / static_cast<double>(d));
}

double region_tail_threshold(std::size_t d, double theta, std::size_t n, double s, int tail_case, std::optional<double> c) {
    check_theta(theta);
    if (d == 0) throw InvalidArgument("region_tail: d must be >= 1");
    if (n == 0 || !(s >= 1.0)) throw RegimeError("region_tail: needs n >= 1 and s >= 1");
    const double q = 4.0 * pi * s / (static_cast<double>(n) * theta);
    if (q > 1.0) throw RegimeError("region_tail: violated 4 pi s/(n theta) <= 1");
    const double dd = static_cast<double>(d);
    if (tail_case == 2) return (1.0 - std::pow(q, 2.0 / dd)) * std::sin(theta);
    if (tail_case != 1) throw InvalidArgument("region_tail: case must be 1 or 2");
    const double cc = c.value_or(region_tail_default_c(d, theta, n, s));
    if (cc < 2.0) throw RegimeError("region_tail: violated c >= 2");
    if (std::exp(-dd * cc / 4.0) > q * (1.0 + 1e-12)) throw RegimeError("region_tail: violated e^{-dc/4} <= 4 pi s/(n theta)");
    return std::sqrt(std::log(1.0 / q) / (2.0 * cc * dd)) * std::sin(theta);
}

TailCheckResult mc_region_max_margin(std::size_t d, double theta, std::size_t n, double s, int tail_case,
                                      std::size_t trials, RngStream& rng, std::optional<double> c) {
    if (d < 2) throw InvalidArgument("mc_region_max_margin: needs d >= 2");
    const double threshold = region_tail_threshold(d, theta, n, s, tail_case, c);
    const double bound = 2.0 * std::exp(-s / 2.0);
    const Pair pr = canonical_pair(d, theta);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream trial = rng.child(t);
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vector x = sample_sphere(d, trial);
            if (in_disagreement(x, pr.u, pr.v)) best = std::max(best, std::abs(dot(pr.u, x)));
        }
        if (best <= threshold) ++hits;
    }
    return tail_result(hits, trials, bound);
}

std::size_t superlinear_horizon(double rho, double kappa, double M, double delta) {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("superlinear: rho must lie in (0, 1)");
    if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("superlinear: kappa must lie in (0, 1)");
    if (!(M >= 0.0)) throw InvalidArgument("superlinear: M must be >= 0");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("superlinear: delta must lie in (0, 1)");
    const double m_star = std::max(std::log(std::log(1.0 / kappa)), std::log(std::log(M + 1.0))) / rho;
    const double T = 1.5 * (m_star + std::log(std::numbers::e / delta));
    return static_cast<std::size_t>(std::max(0.0, std::ceil(T)));
}

namespace {
double decay_step(double log_xi, double rho, double log_kappa) {
    return std::min(log_xi, (1.0 - rho) * log_xi + rho * log_kappa);
}
} // namespace

std::vector<double> superlinear_trajectory(double rho, double kappa, double xi0, std::size_t steps) {
    if (!(xi0 >= 0.0)) throw InvalidArgument("superlinear: xi0 must be >= 0");
    std::vector<double> out{xi0};
    double lx = xi0 > 0.0 ? std::log(xi0) : -std::numeric_limits<double>::infinity();
    const double lk = std::log(kappa);
    for (std::size_t t = 0; t < steps; ++t) {
        lx = decay_step(lx, rho, lk);
        out.push_back(std::exp(lx));
    }
    return out;
}

TailCheckResult simulate_superlinear(double rho, double kappa, double M, double p_decay, double delta,
                                     std::size_t trials, RngStream& rng, std::optional<double> xi0) {
    const std::size_t T = superlinear_horizon(rho, kappa, M, delta);
    if (!(p_decay >= 2.0 / 3.0 - 1e-12 && p_decay <= 1.0)) throw InvalidArgument("superlinear: p_decay must lie in [2/3, 1]");
    const double start = xi0.value_or(M);
    if (!(start >= 0.0 && start <= M)) throw InvalidArgument("superlinear: need 0 <= xi0 <= M");

    const double lk = std::log(kappa);
    const double fail_at = 2.0 + lk; // ln(e^2 kappa)
    std::size_t fails = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        RngStream r = rng.child(trial);
        double lx = start > 0.0 ? std::log(start) : -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < T; ++t)
            if (r.bernoulli(p_decay)) lx = decay_step(lx, rho, lk);
        if (lx > fail_at) ++fails;
    }
    return tail_result(fails, trials, delta);
}

UpdateCountTrial update_count_trial(std::size_t d, RngStream& rng) {
    if (d < 2) throw InvalidArgument("update_count_trial: needs d >= 2");
    UpdateCountTrial out;
    out.alpha = 0.05 + 0.9 * rng.uniform();
    out.beta = 0.05 + 0.55 * rng.uniform();
    out.bound = static_cast<std::size_t>(std::ceil(2.0 / (out.beta * out.beta) * std::log(1.0 / out.alpha)));

    const Vector w_star = sample_sphere(d, rng);
    Vector w = out.alpha * w_star + std::sqrt(1.0 - out.alpha * out.alpha) * sample_orthogonal(w_star, rng);

    for (std::size_t guard = 0; guard < 1000000; ++guard) {
        const double wn = norm(w);
        const Vector wh = (1.0 / wn) * w;
        const double cos_phi = dot(wh, w_star);
        Vector p = w_star - cos_phi * wh;
        const double sin_phi = norm(p);
        // A disagreeing point with |x.w| >= beta |w| exists iff beta < sin(phi).
        if (!(sin_phi > out.beta * (1.0 + 1e-12)) || cos_phi <= 0.0) break;
        p *= 1.0 / sin_phi;

        const double b_min = std::min(out.beta * (1.0 + 1e-9), 0.5 * (out.beta + sin_phi));
        const double b = rng.bernoulli(0.5) ? b_min : b_min + (sin_phi - b_min) * rng.uniform();
        const double c_lo = b * cos_phi / sin_phi;
        const double c_hi = std::sqrt(std::max(1.0 - b * b, 0.0));
        if (!(c_hi > c_lo)) break;
        const double c = c_lo + (c_hi - c_lo) * rng.uniform_open();
        Vector x = -b * wh + c * p;
        if (d >= 3) {
            Vector r = sample_sphere(d, rng);
            r -= dot(r, wh) * wh;
            r -= dot(r, p) * p;
            const double rn = norm(r);
            const double e = std::sqrt(std::max(1.0 - b * b - c * c, 0.0));
            if (rn > 1e-12) x += (e / rn) * r;
        }
        x = normalized(x);
        if (rng.bernoulli(0.5)) x *= -1.0;
        // Guard the preconditions against rounding in the construction.
        const double xw = dot(x, w);
        if (std::abs(xw) < out.beta * wn || xw * dot(x, w_star) >= 0.0) break;
        w -= xw * x;
        ++out.updates;
    }
    return out;
}

} // namespace sdlc
