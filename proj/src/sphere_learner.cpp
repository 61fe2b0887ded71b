#include "sdlc/sphere_learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdlc/errors.hpp"

namespace sdlc {

SphereSchedule make_schedule(std::size_t n, std::size_t d, double delta, double c_prime) {
    if (n < 4) throw InvalidArgument("make_schedule: n must be >= 4");
    if (d == 0) throw InvalidArgument("make_schedule: d must be >= 1");
    if (!(delta > 0.0 && delta <= 0.5)) throw InvalidArgument("make_schedule: delta must lie in (0, 1/2]");
    if (!(c_prime > 0.0)) throw InvalidArgument("make_schedule: c_prime must be positive");

    const double lnln = std::max(std::log(std::log(static_cast<double>(n))), 1.0);
    const double raw = std::ceil(c_prime * static_cast<double>(d) * lnln * std::log(1.0 / delta));
    SphereSchedule s;
    s.c_prime = c_prime;
    s.delta = delta;
    s.T = std::min<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), n / 2);
    s.k = std::min<std::size_t>(s.T, std::max<std::size_t>(1, n / 4));
    s.N = n / (2 * s.k);
    return s;
}

std::size_t init_prefix_size(std::size_t n, std::size_t d, double delta) {
    const auto cap = static_cast<std::size_t>(std::ceil(50.0 * static_cast<double>(d) * std::log(1.0 / delta)));
    return std::max<std::size_t>(1, std::min(n / 4, cap));
}

std::size_t init_mistake_budget(std::size_t d, double delta, double c_init) {
    return static_cast<std::size_t>(std::ceil(c_init * static_cast<double>(d) * std::log(1.0 / delta)));
}

InitResult initialize_hypothesis(const std::vector<Vector>& points, std::span<const std::size_t> prefix,
                                 const Hypothesis& w0, std::size_t mistake_budget, LabelOracle& oracle,
                                 Phase phase) {
    if (prefix.empty()) throw InvalidArgument("initialize_hypothesis: empty prefix");
    InitResult out{w0, 0, 0};
    Vector w = w0.w();
    for (std::size_t i : prefix) {
        if (out.mistakes >= mistake_budget) break;
        const Vector& x = points[i];
        const double wx = dot(w, x);
        const int z = sign_of(wx);
        ++out.consumed;
        if (oracle.predict(i, z, std::abs(wx), phase) == z) continue;
        ++out.mistakes;
        w -= (2.0 * wx) * x;
    }
    out.h = Hypothesis(std::move(w));
    return out;
}

InitResult initialize_hypothesis(const std::vector<Vector>& points, std::span<const std::size_t> prefix,
                                 std::size_t d, double delta, double c_init, LabelOracle& oracle, RngStream& rng) {
    Hypothesis w0(sample_sphere(d, rng));
    return initialize_hypothesis(points, prefix, w0, init_mistake_budget(d, delta, c_init), oracle);
}

namespace {

void trace(std::vector<double>& out, const Hypothesis& h, const LabeledDataset& ds, bool on) {
    if (on) out.push_back(tan_theta(h.w(), *ds.ground_truth()));
}

// Single arm, max margin first, re-sorting the rest after each update.
Hypothesis fallback_pass(const std::vector<Vector>& points, std::vector<std::size_t> rest, Hypothesis h,
                         LabelOracle& oracle, std::size_t& updates) {
    while (!rest.empty()) {
        PassResult r = margin_perceptron_pass(points, rest, h, oracle, Phase::fallback);
        h = r.h;
        if (!r.update) break;
        ++updates;
        std::erase_if(rest, [&](std::size_t i) { return oracle.predicted(i); });
    }
    return h;
}

void label_unpredicted(const std::vector<Vector>& points, std::span<const std::size_t> U, const Hypothesis& h,
                       LabelOracle& oracle) {
    for (std::size_t i : U) {
        if (oracle.predicted(i)) continue;
        const double m = dot(h.w(), points[i]);
        oracle.predict(i, sign_of(m), std::abs(m), Phase::cross_label);
    }
}

} // namespace

SphereRunResult run_sphere(const LabeledDataset& ds, const SphereConfig& cfg, RngStream& rng) {
    const std::size_t n = ds.size();
    const std::size_t d = ds.dim();
    if (cfg.instrumented && !ds.ground_truth())
        throw InvalidArgument("run_sphere: instrumented mode needs a ground truth");

    SphereRunResult out;
    if (cfg.schedule)
        out.schedule = *cfg.schedule;
    else if (n >= 4)
        out.schedule = make_schedule(n, d, cfg.delta, cfg.c_prime);
    else
        out.schedule = SphereSchedule{1, 1, 1, cfg.c_prime, cfg.delta};
    if (out.schedule.k == 0) throw InvalidArgument("run_sphere: schedule needs k >= 1");
    const std::size_t k = out.schedule.k;
    const auto& points = ds.points();
    LabelOracle oracle(ds.labels());
    const Vector* truth = cfg.instrumented ? &*ds.ground_truth() : nullptr;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    RngStream order_rng = rng.child(1);
    order_rng.shuffle(std::span<std::size_t>(perm));

    const std::size_t P = init_prefix_size(n, d, cfg.delta);
    RngStream init_rng = rng.child(2);
    InitResult init = initialize_hypothesis(points, std::span<const std::size_t>(perm).first(P), d, cfg.delta,
                                            cfg.c_init, oracle, init_rng);
    out.init_mistakes = init.mistakes;

    // Prefix points the initializer never reached join the remainder.
    std::vector<std::size_t> rest(perm.begin() + static_cast<std::ptrdiff_t>(init.consumed), perm.end());

    Hypothesis w = init.h;
    Hypothesis v = init.h;
    trace(out.tan_trace_w, w, ds, cfg.instrumented);
    trace(out.tan_trace_v, v, ds, cfg.instrumented);

    if (rest.size() < 2 * k) {
        out.fallback = true;
        out.arm.assign(n, 0);
        w = fallback_pass(points, rest, w, oracle, out.updates_w);
        out.final_w = w.w();
        out.final_v = w.w();
        out.transcript = oracle.release();
        return out;
    }

    RngStream bucket_rng = rng.child(3);
    Bucketing split = split_buckets(rest.size(), 2 * k, bucket_rng);
    for (auto& bucket : split.buckets)
        for (std::size_t& j : bucket) j = rest[j];
    out.arm.assign(n, 0);
    for (std::size_t t = 0; t < 2 * k; ++t)
        for (std::size_t j : split.buckets[t]) out.arm[j] = t < k ? 1 : 2;

    for (std::size_t t = 0; t < k; ++t) {
        PassResult rw = margin_perceptron_pass(points, split.buckets[t], w, oracle, Phase::train_w, truth);
        if (rw.update) {
            w = rw.h;
            ++out.updates_w;
            trace(out.tan_trace_w, w, ds, cfg.instrumented);
        }
        PassResult rv = margin_perceptron_pass(points, split.buckets[k + t], v, oracle, Phase::train_v, truth);
        if (rv.update) {
            v = rv.h;
            ++out.updates_v;
            trace(out.tan_trace_v, v, ds, cfg.instrumented);
        }
    }

    // Each arm labels only the other arm's buckets.
    for (std::size_t t = 0; t < k; ++t) label_unpredicted(points, split.buckets[k + t], w, oracle);
    for (std::size_t t = 0; t < k; ++t) label_unpredicted(points, split.buckets[t], v, oracle);

    out.final_w = w.w();
    out.final_v = v.w();
    out.transcript = oracle.release();
    return out;
}

} // namespace sdlc
