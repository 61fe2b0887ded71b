#include "sdlc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdlc/sphere_learner.hpp"

namespace sdlc {

Transcript random_order_run(const LabeledDataset& ds, RngStream& rng, const BaselineConfig& cfg) {
    const std::size_t n = ds.size();
    const std::size_t d = ds.dim();
    const auto& points = ds.points();
    LabelOracle oracle(ds.labels());

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    RngStream order_rng = rng.child(1);
    order_rng.shuffle(std::span<std::size_t>(perm));

    RngStream init_rng = rng.child(2);
    Hypothesis h(cfg.initial ? *cfg.initial : sample_sphere(d, init_rng));
    std::size_t start = 0;
    if (cfg.init_phase && n >= 4) {
        const std::size_t P = init_prefix_size(n, d, cfg.delta);
        InitResult init = initialize_hypothesis(points, std::span<const std::size_t>(perm).first(P), h,
                                                init_mistake_budget(d, cfg.delta, cfg.c_init), oracle);
        h = init.h;
        start = init.consumed;
    }

    MarginPerceptronLearner learner(h);
    for (std::size_t j = start; j < n; ++j) {
        const std::size_t i = perm[j];
        const double m = dot(learner.hypothesis(), points[i]);
        const int z = sign_of(m);
        const int truth = oracle.predict(i, z, std::abs(m), Phase::random_order);
        if (z != truth) learner.on_mistake(points[i], truth);
    }
    return oracle.release();
}

Transcript greedy_adversarial_order(const LabeledDataset& ds, OnlineLearner& learner) {
    const auto& points = ds.points();
    LabelOracle oracle(ds.labels());
    std::vector<std::size_t> rest(ds.size());
    std::iota(rest.begin(), rest.end(), 0);

    while (!rest.empty()) {
        // Ascending margin under the current hypothesis, ties by index. Mistakes
        // come every few points, so only a short head is sorted at a time.
        std::vector<std::pair<double, std::size_t>> keyed;
        keyed.reserve(rest.size());
        for (std::size_t i : rest) keyed.emplace_back(std::abs(dot(learner.hypothesis(), points[i])), i);

        std::size_t consumed = 0, sorted_to = 0;
        bool updated = false;
        while (consumed < keyed.size() && !updated) {
            if (consumed == sorted_to) {
                const std::size_t end = std::min(keyed.size(), sorted_to + 64);
                std::partial_sort(keyed.begin() + static_cast<std::ptrdiff_t>(sorted_to),
                                  keyed.begin() + static_cast<std::ptrdiff_t>(end), keyed.end());
                sorted_to = end;
            }
            const auto [m, i] = keyed[consumed++];
            const int z = sign_of(dot(learner.hypothesis(), points[i]));
            const int truth = oracle.predict(i, z, m, Phase::adversarial);
            if (z != truth) {
                learner.on_mistake(points[i], truth);
                updated = true;
            }
        }
        rest.clear();
        for (std::size_t j = consumed; j < keyed.size(); ++j) rest.push_back(keyed[j].second);
    }
    return oracle.release();
}

} // namespace sdlc
