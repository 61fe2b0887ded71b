#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sdlc/arbitrary_learner.hpp"
#include "sdlc/errors.hpp"
#include "sdlc/forster.hpp"

using namespace sdlc;

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

TEST_SUITE("arbitrary_learner") {

TEST_CASE("budget helpers") {
    CHECK(weak_sweep_budget(1) == 1);
    CHECK(weak_mistake_bound(1) == 1);
    CHECK(weak_sweep_budget(4) == static_cast<std::size_t>(std::ceil(20.0 * std::log(4.0))));
    CHECK(weak_mistake_bound(4) == static_cast<std::size_t>(std::floor(20.0 * std::log(4.0))) + 1);
}

TEST_CASE("weak_run: data labeled by the initial hypothesis covers in one sweep with no mistakes") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const LabeledDataset base = gen_arbitrary(Family::clustered, 400, 4, {}, RngStream(s));
        const auto X = all_indices(base.size());
        const ForsterOutput f = forster_transform(base.points(), 1.0 / 8.0);
        RngStream probe = RngStream(s, 3).child(1);
        const Vector w0 = sample_sphere(f.dim(), probe);
        std::vector<int> labels(base.size(), 1);
        for (std::size_t j = 0; j < f.retained_indices.size(); ++j)
            labels[f.retained_indices[j]] = sign_of(dot(w0, f.transformed_points[j]));
        LabelOracle oracle(labels);
        RngStream rng(s, 3);
        const WeakRunResult res = weak_run(base.points(), X, oracle, rng);
        CHECK(res.terminated_by == Termination::coverage);
        CHECK(res.sweeps == 1);
        CHECK(res.mistakes == 0);
        CHECK(res.labeled_set.size() * 4 * res.k >= res.U_size);
    }
}

TEST_CASE("weak_run: d=1 uses one sweep and at most one mistake") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const LabeledDataset ds = gen_uniform_sphere(30, 1, RngStream(s));
        LabelOracle oracle(ds.labels());
        RngStream rng(s);
        const auto X = all_indices(30);
        const WeakRunResult res = weak_run(ds.points(), X, oracle, rng);
        CHECK(res.k == 1);
        CHECK(res.sweep_budget == 1);
        CHECK(res.mistakes <= 1);
    }
}

TEST_CASE("weak_run on clustered d=5 data: contract over 200 seeds") {
    std::size_t covered = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const LabeledDataset ds = gen_arbitrary(Family::clustered, 2000, 5, {}, RngStream(3000 + s));
        LabelOracle oracle(ds.labels());
        RngStream rng(3000 + s, 1);
        WeakConfig cfg;
        cfg.ground_truth = &*ds.ground_truth();
        const auto X = all_indices(ds.size());
        const WeakRunResult res = weak_run(ds.points(), X, oracle, rng, cfg);
        CHECK(res.mistakes <= weak_mistake_bound(res.k));
        CHECK(res.soft_margin_violations == 0);
        for (const auto& [i, y] : res.labeled_set) CHECK(y == ds.labels()[i]);
        if (res.terminated_by == Termination::coverage) {
            ++covered;
            CHECK(res.labeled_set.size() * 4 * res.k >= res.U_size);
            CHECK(res.labeled_set.size() * 4 * ds.dim() >= ds.size());
        }
        CHECK(oracle.transcript().mistakes() == res.mistakes);
    }
    CHECK(covered >= 60);
}

TEST_CASE("compute_boost_budget examples") {
    CHECK(compute_boost_budget(10, 0.9, 0.1, 0.5, 0.9).runs_outer == 1);
    CHECK(compute_boost_budget(10, 0.01, 0.1, 0.5, 0.9).runs_outer ==
          static_cast<std::size_t>(std::ceil(std::log(100.0) / std::log(10.0 / 9.0))));
    CHECK(compute_boost_budget(10, 0.01, 0.1, 0.5, 0.9).runs_outer == 44);
    const BoostBudget b = compute_boost_budget(7, 0.05, 0.2, 1.0, 0.8);
    CHECK(b.retries_per_round == static_cast<std::size_t>(std::ceil(std::log(b.runs_outer / 0.2))));
    CHECK(b.mistake_cap == b.retries_per_round * b.runs_outer * weak_mistake_bound(7));
    CHECK_THROWS_AS(compute_boost_budget(0, 0.1, 0.1, 0.5, 0.5), InvalidArgument);
    CHECK_THROWS_AS(compute_boost_budget(3, 0.1, 0.1, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("strong_run: eps=1 needs nothing") {
    const LabeledDataset ds = gen_arbitrary(Family::clustered, 100, 3, {}, RngStream(1));
    StrongConfig cfg;
    cfg.eps = 1.0;
    RngStream r(1);
    const StrongRunResult res = strong_run(ds, r, cfg);
    CHECK(res.transcript.size() == 0);
    CHECK(res.transcript.mistakes() == 0);
}

TEST_CASE("strong_run: a single point") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const LabeledDataset ds = gen_uniform_sphere(1, 3, RngStream(s));
        RngStream r(s);
        const StrongRunResult res = strong_run(ds, r);
        CHECK(res.transcript.size() == 1);
        CHECK(res.covered == 1);
        CHECK(res.transcript.mistakes() <= 1);
    }
}

TEST_CASE("strong_run: no point is predicted twice and coverage is counted from the transcript") {
    for (Family fam : {Family::clustered, Family::low_margin, Family::subspace_degenerate, Family::grid})
        for (std::uint64_t s = 0; s < 5; ++s) {
            CAPTURE(to_string(fam));
            const LabeledDataset ds = gen_arbitrary(fam, 1500, 4, {}, RngStream(60 + s));
            RngStream r(s);
            StrongConfig cfg;
            const StrongRunResult res = strong_run(ds, r, cfg);
            std::set<std::size_t> seen;
            for (const auto& rec : res.transcript.records()) CHECK(seen.insert(rec.index).second);
            CHECK(res.covered == res.transcript.size());
            CHECK(res.transcript.mistakes() <= res.budget.mistake_cap + weak_mistake_bound(ds.dim()));
            if (!res.partial) CHECK(static_cast<double>(res.covered) >= (1 - cfg.eps) * ds.size());
        }
}

}
