#include "sdlc/margin_perceptron.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdlc/errors.hpp"

namespace sdlc {

Hypothesis::Hypothesis(Vector w) : w_(std::move(w)), norm_(sdlc::norm(w_)) {
    if (w_.dim() == 0) throw InvalidArgument("hypothesis: empty vector");
    if (!is_finite(w_)) throw InvalidArgument("hypothesis: non-finite weight");
    if (norm_ < 1e-300) throw DegenerateHypothesis("hypothesis: zero weight vector");
}

Hypothesis mp_update(const Hypothesis& h, const Vector& x) {
    if (x.dim() != h.dim()) throw InvalidArgument("mp_update: dimension mismatch");
    const double wx = dot(h.w(), x);
    Vector w = h.w() - wx * x;
    if (norm(w) < 1e-300) throw DegenerateHypothesis("mp_update: update annihilated the hypothesis");
    return Hypothesis(std::move(w));
}

Hypothesis corrective_update(const Hypothesis& h, const Vector& x) {
    if (x.dim() != h.dim()) throw InvalidArgument("corrective_update: dimension mismatch");
    const double wx = dot(h.w(), x);
    Vector w = h.w() - wx * x;
    if (norm(w) > 1e-12 * h.norm()) return Hypothesis(std::move(w));
    return Hypothesis(h.w() - (2.0 * wx) * x);
}

double decay_bound(double theta, double r) {
    if (!(theta >= 0.0 && theta < std::numbers::pi / 2))
        throw InvalidArgument("decay_bound: theta must lie in [0, pi/2)");
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("decay_bound: r must lie in [0, 1]");
    const double t = std::tan(theta);
    return (1.0 - r * r) * t * t;
}

std::vector<std::size_t> order_by_margin(const std::vector<Vector>& points, std::span<const std::size_t> U,
                                         const Vector& w) {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(U.size());
    for (std::size_t i : U) keyed.emplace_back(std::abs(dot(w, points[i])), i);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::size_t> out;
    out.reserve(keyed.size());
    for (const auto& [m, i] : keyed) out.push_back(i);
    return out;
}

PassResult margin_perceptron_pass(const std::vector<Vector>& points, std::span<const std::size_t> U,
                                  const Hypothesis& h, LabelOracle& oracle, Phase phase,
                                  const Vector* ground_truth) {
    if (U.empty()) throw InvalidArgument("margin_perceptron_pass: empty point list");
    PassResult out{h, 0, std::nullopt};
    for (std::size_t i : order_by_margin(points, U, h.w())) {
        const Vector& x = points[i];
        const double wx = dot(h.w(), x);
        const int z = sign_of(wx);
        const int truth = oracle.predict(i, z, std::abs(wx), phase);
        ++out.predictions;
        if (z == truth) continue;

        UpdateRecord rec{i, std::abs(wx), std::nullopt, std::nullopt, std::nullopt};
        out.h = corrective_update(h, x);
        if (ground_truth) {
            const double theta = angle(h.w(), *ground_truth);
            const double s = std::sin(theta);
            if (s > 0.0) rec.r = std::abs(wx) / (h.norm() * s);
            rec.tan_before = tan_theta(h.w(), *ground_truth);
            rec.tan_after = tan_theta(out.h.w(), *ground_truth);
        }
        out.update = rec;
        return out;
    }
    return out;
}

double update_count_bound(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("update_count_bound: alpha must lie in (0, 1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("update_count_bound: beta must lie in (0, 1]");
    return 2.0 / (beta * beta) * std::log(1.0 / alpha);
}

} // namespace sdlc
