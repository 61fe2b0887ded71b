#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "sdlc/baselines.hpp"
#include "sdlc/errors.hpp"
#include "sdlc/oracles.hpp"

using namespace sdlc;

TEST_SUITE("oracles_baselines") {

TEST_CASE("tail_result: vacuous bounds pass, std_err is binomial") {
    const TailCheckResult t = tail_result(30, 1000, 0.01);
    CHECK(t.empirical_prob == doctest::Approx(0.03));
    CHECK(t.std_err == doctest::Approx(std::sqrt(0.03 * 0.97 / 1000)));
    CHECK_FALSE(t.pass);
    CHECK(tail_result(1000, 1000, 1.0).pass);
    CHECK(tail_result(0, 10, 0.0).pass);
}

TEST_CASE("disagreement mass at theta = pi/2 has mean n/2") {
    RngStream r(1);
    const MassCheckResult m = mc_disagreement_mass(4, std::numbers::pi / 2, 2000, 300, r);
    CHECK(m.expected_count == doctest::Approx(1000.0));
    CHECK(std::abs(m.mean_count - 1000.0) <= 3 * m.std_err);
    CHECK(m.pass());
}

TEST_CASE("disagreement mass for small theta with n theta = 50") {
    RngStream r(2);
    const double th = 0.005;
    const auto n = static_cast<std::size_t>(50.0 / th);
    const MassCheckResult m = mc_disagreement_mass(3, th, n, 500, r);
    CHECK(m.expected_count == doctest::Approx(50.0 / std::numbers::pi));
    CHECK(std::abs(m.mean_count - 50.0 / std::numbers::pi) <= 3 * m.std_err);
}

TEST_CASE("disagreement tail at theta = pi/4") {
    RngStream r(3);
    const double th = std::numbers::pi / 4, p = th / std::numbers::pi;
    const MassCheckResult m = mc_disagreement_mass(3, th, 10000, 1000, r);
    CHECK(m.tail_threshold == doctest::Approx(10000 * p + std::sqrt(2 * p * 10000 * std::log(100.0))));
    CHECK(m.tail.analytic_bound == 0.01);
    CHECK(m.tail.pass);
    CHECK_THROWS_AS(mc_disagreement_mass(1, 0.5, 100, 100, r), InvalidArgument);
}

TEST_CASE("max-margin tail examples") {
    RngStream r(4);
    const TailCheckResult a = mc_max_margin_tail(3, std::numbers::pi / 2, 100, 0.5, 1, 500, r);
    CHECK(a.analytic_bound == doctest::Approx(std::exp(-100 * std::sqrt(0.75) / 2)));
    CHECK(std::log(a.analytic_bound) == doctest::Approx(-43.3).epsilon(1e-3));
    CHECK(a.empirical_prob == 0.0);
    CHECK(a.pass);

    const TailCheckResult zero = mc_max_margin_tail(5, 0.7, 20, 0.0, 1, 300, r);
    CHECK(zero.empirical_prob == 0.0);
    CHECK(zero.pass);
    const TailCheckResult one = mc_max_margin_tail(5, 0.7, 20, 1.0, 2, 300, r);
    CHECK(one.empirical_prob == 0.0);
    CHECK(one.pass);

    CHECK_THROWS_AS(mc_max_margin_tail(3, 1e-5, 10, 0.5, 1, 100, r), RegimeError);
    CHECK_THROWS_AS(mc_max_margin_tail(2, 0.5, 10, 0.5, 1, 100, r), InvalidArgument);
    CHECK_THROWS_AS(mc_max_margin_tail(3, 0.5, 10, 0.5, 3, 100, r), InvalidArgument);
}

TEST_CASE("region max-margin: bound, regime and the reference cell") {
    RngStream r(5);
    const TailCheckResult s8 = mc_region_max_margin(4, 1.0, 100000, 8.0, 2, 100, r);
    CHECK(s8.analytic_bound == doctest::Approx(2 * std::exp(-4.0)));
    CHECK(s8.analytic_bound == doctest::Approx(0.0366).epsilon(1e-3));
    // n theta < 4 pi s
    CHECK_THROWS_AS(region_tail_threshold(4, 0.5, 100, 4.0, 1), RegimeError);
    CHECK_THROWS_AS(mc_region_max_margin(4, 0.5, 100, 4.0, 2, 100, r), RegimeError);
    CHECK_THROWS_AS(region_tail_threshold(4, 0.5, 10000, 4.0, 1, 1.0), RegimeError);

    const double th2 = region_tail_threshold(4, 0.5, 10000, 4.0, 2);
    CHECK(th2 == doctest::Approx((1 - std::sqrt(4 * std::numbers::pi * 4 / 5000)) * std::sin(0.5)));

    const TailCheckResult cell = mc_region_max_margin(4, 0.5, 10000, 4.0, 1, 2000, r);
    CHECK(cell.analytic_bound == doctest::Approx(2 * std::exp(-2.0)));
    CHECK(cell.pass);
}

TEST_CASE("super-linear recurrence") {
    const auto traj = superlinear_trajectory(0.5, 0.01, 1.0, 5);
    CHECK(traj[1] == doctest::Approx(0.1));
    CHECK(traj[2] == doctest::Approx(0.0316).epsilon(1e-3));
    for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj[i] <= traj[i - 1]);
    const std::size_t T = superlinear_horizon(0.5, 0.01, 1.0, 0.1);
    CHECK(superlinear_trajectory(0.5, 0.01, 1.0, T).back() <= std::exp(2.0) * 0.01);
    CHECK(superlinear_horizon(0.125, 1e-6, 1.0, 0.1) == 37);

    RngStream r(6);
    const TailCheckResult below = simulate_superlinear(0.5, 0.5, 1.0, 2.0 / 3.0, 0.1, 200, r, 0.3);
    CHECK(below.empirical_prob == 0.0);

    const TailCheckResult mc = simulate_superlinear(0.125, 1e-6, 1.0, 2.0 / 3.0, 0.1, 10000, r);
    CHECK(mc.empirical_prob <= 0.1 + 3 * mc.std_err);
}

TEST_CASE("random_order_run: tiny and consistent cases") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const LabeledDataset ds = gen_uniform_sphere(2, 1, RngStream(s));
        RngStream r(s);
        const Transcript t = random_order_run(ds, r);
        CHECK(t.size() == 2);
        CHECK(t.mistakes() <= 2);
    }
    const LabeledDataset ds = gen_uniform_sphere(500, 6, RngStream(9));
    BaselineConfig cfg;
    cfg.initial = *ds.ground_truth();
    cfg.init_phase = false;
    RngStream r(2);
    CHECK(random_order_run(ds, r, cfg).mistakes() == 0);
}

TEST_CASE("random_order_run: mistakes grow with n in d=10") {
    std::vector<double> means;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        double total = 0;
        for (std::uint64_t s = 0; s < 10; ++s) {
            const LabeledDataset ds = gen_uniform_sphere(n, 10, RngStream(s, n));
            RngStream r(s, 3);
            total += static_cast<double>(random_order_run(ds, r).mistakes());
        }
        means.push_back(total / 10);
    }
    CHECK(means[0] < means[1]);
    CHECK(means[1] < means[2]);
}

TEST_CASE("greedy_adversarial_order: n=1 and margin-bounded data") {
    const LabeledDataset one = gen_uniform_sphere(1, 4, RngStream(1));
    MarginPerceptronLearner l1(Hypothesis(-*one.ground_truth()));
    const Transcript t1 = greedy_adversarial_order(one, l1);
    CHECK(t1.size() == 1);
    CHECK(t1.mistakes() == 1);

    // Updates made while the current margin stays >= beta |w| form a
    // sequence of the capped kind, so that prefix obeys the cap.
    struct Recorder : OnlineLearner {
        MarginPerceptronLearner inner;
        std::vector<double> rel;
        explicit Recorder(Hypothesis h) : inner(std::move(h)) {}
        const Vector& hypothesis() const override { return inner.hypothesis(); }
        void on_mistake(const Vector& x, int truth) override {
            rel.push_back(std::abs(oracle::dotp(inner.hypothesis(), x)) / norm(inner.hypothesis()));
            inner.on_mistake(x, truth);
        }
    };
    FamilyParams p;
    p.gamma = 0.6;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const LabeledDataset ds = gen_arbitrary(Family::low_margin, 400, 3, p, RngStream(s));
        RngStream r(s);
        const Vector w0 = sample_sphere(3, r);
        const double alpha = oracle::dotp(w0, *ds.ground_truth());
        Recorder learner{Hypothesis(w0)};
        const Transcript t = greedy_adversarial_order(ds, learner);
        CHECK(t.size() == 400);
        CHECK(learner.inner.updates() == t.mistakes());
        if (alpha <= 0) continue;
        const double beta = 0.3;
        std::size_t prefix = 0;
        while (prefix < learner.rel.size() && learner.rel[prefix] >= beta) ++prefix;
        CHECK(prefix <= oracle::update_cap(alpha, beta));
    }
}

TEST_CASE("greedy adversarial order costs at least as much as random order (d=10, n=1e4)") {
    double adv = 0, rnd = 0;
    for (std::uint64_t s = 0; s < 3; ++s) {
        const LabeledDataset ds = gen_uniform_sphere(10000, 10, RngStream(s, 77));
        RngStream r(s);
        const Vector w0 = sample_sphere(10, r);
        BaselineConfig cfg;
        cfg.init_phase = false;
        cfg.initial = w0;
        RngStream r2(s, 1);
        rnd += static_cast<double>(random_order_run(ds, r2, cfg).mistakes());
        MarginPerceptronLearner learner{Hypothesis(w0)};
        adv += static_cast<double>(greedy_adversarial_order(ds, learner).mistakes());
    }
    MESSAGE("adversarial " << adv / 3 << " random " << rnd / 3);
    CHECK(adv >= rnd);
}

}
