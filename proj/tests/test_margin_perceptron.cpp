#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "oracle.hpp"
#include "sdlc/errors.hpp"
#include "sdlc/margin_perceptron.hpp"
#include "sdlc/oracles.hpp"
#include "sdlc/protocol.hpp"

using namespace sdlc;

namespace {

std::vector<std::size_t> iota_n(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

TEST_SUITE("margin_perceptron") {

TEST_CASE("mp_update examples") {
    const Hypothesis h(Vector{1, 0});
    CHECK(mp_update(h, Vector{0, 1}).w() == Vector{1, 0});
    const double s = 1.0 / std::sqrt(2.0);
    const Vector w2 = mp_update(h, Vector{s, s}).w();
    CHECK(w2[0] == doctest::Approx(0.5));
    CHECK(w2[1] == doctest::Approx(-0.5));
    CHECK_THROWS_AS(mp_update(Hypothesis(Vector{0.6, 0.8}), Vector{0.6, 0.8}), DegenerateHypothesis);
}

TEST_CASE("Hypothesis rejects zero and non-finite weights") {
    CHECK_THROWS_AS(Hypothesis(Vector{0, 0}), DegenerateHypothesis);
    CHECK_THROWS(Hypothesis(Vector{std::nan(""), 1}));
    CHECK_THROWS(Hypothesis(Vector{}));
}

TEST_CASE("decay_bound examples") {
    CHECK(decay_bound(std::numbers::pi / 4, 1.0) == doctest::Approx(0.0));
    CHECK(decay_bound(std::numbers::pi / 4, 0.6) == doctest::Approx(0.64));
    CHECK(decay_bound(0.0, 0.37) == 0.0);
    CHECK_THROWS_AS(decay_bound(std::numbers::pi / 2, 0.5), InvalidArgument);
    CHECK_THROWS_AS(decay_bound(0.3, 1.5), InvalidArgument);
}

TEST_CASE("update_count_bound examples") {
    CHECK(update_count_bound(1.0, 1.0) == 0.0);
    CHECK(update_count_bound(0.5, 1.0) == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(update_count_bound(0.5, 1.0) == doctest::Approx(1.386).epsilon(1e-3));
    const double a = 1.0 / (2.0 * std::sqrt(16.0));
    CHECK(update_count_bound(a, a) == doctest::Approx(8.0 * 16.0 * std::log(8.0)));
    CHECK(update_count_bound(a, a) == doctest::Approx(266.2).epsilon(1e-3));
}

TEST_CASE("pass over points that all agree with h") {
    RngStream r(5);
    const Vector w = sample_sphere(4, r);
    std::vector<Vector> pts;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
        pts.push_back(sample_sphere(4, r));
        y.push_back(sign_of(dot(w, pts.back())));
    }
    LabelOracle oracle(y);
    const auto U = iota_n(pts.size());
    const PassResult res = margin_perceptron_pass(pts, U, Hypothesis(w), oracle, Phase::train_w);
    CHECK(res.h.w() == w);
    CHECK(res.predictions == 30);
    CHECK_FALSE(res.update.has_value());
    CHECK(oracle.transcript().mistakes() == 0);
    CHECK(oracle.transcript().size() == 30);
}

TEST_CASE("single wrong point: one prediction, one mistake, one update") {
    const std::vector<Vector> pts{Vector{0.6, 0.8}};
    const std::vector<int> y{-1};
    LabelOracle oracle(y);
    const std::size_t U[] = {0};
    const Hypothesis h(Vector{1, 0});
    const PassResult res = margin_perceptron_pass(pts, U, h, oracle, Phase::train_w);
    CHECK(res.predictions == 1);
    CHECK(oracle.transcript().mistakes() == 1);
    CHECK(res.h.w() == mp_update(h, pts[0]).w());
}

TEST_CASE("the pass stops at the largest-margin point of the disagreement region (brute force)") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RngStream r(seed);
        const Vector w{1, 0};
        const Vector w_star = normalized(Vector{std::cos(0.3), std::sin(0.3)});
        std::vector<Vector> pts;
        std::vector<int> y;
        for (int i = 0; i < 100; ++i) {
            pts.push_back(sample_sphere(2, r));
            y.push_back(oracle::dotp(w_star, pts.back()) >= 0 ? 1 : -1);
        }
        // Brute force: the largest |w.x| among points whose prediction is wrong.
        std::optional<std::size_t> expect;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const int pred = oracle::dotp(w, pts[i]) >= 0 ? 1 : -1;
            if (pred == y[i] || (expect && std::abs(pts[i][0]) <= std::abs(pts[*expect][0]))) continue;
            expect = i;
        }
        LabelOracle oracle(y);
        const auto U = iota_n(pts.size());
        const PassResult res = margin_perceptron_pass(pts, U, Hypothesis(w), oracle, Phase::train_w);
        REQUIRE(res.update.has_value() == expect.has_value());
        if (expect) {
            CHECK(res.update->point_index == *expect);
            CHECK(oracle.transcript().records().back().index == *expect);
            CHECK(oracle.transcript().mistakes() == 1);
        }
    }
}

TEST_CASE("order_by_margin breaks ties by index") {
    const std::vector<Vector> pts{Vector{0.5, 0}, Vector{-0.5, 0}, Vector{0.9, 0}, Vector{0.5, 1}};
    const std::size_t U[] = {3, 1, 0, 2};
    const auto order = order_by_margin(pts, U, Vector{1, 0});
    CHECK(order == std::vector<std::size_t>{2, 0, 1, 3});
}

TEST_CASE("protocol: a point cannot be predicted twice or read early") {
    const std::vector<int> y{1, -1};
    LabelOracle oracle(y);
    CHECK_THROWS_AS(oracle.revealed(0), ProtocolViolation);
    CHECK(oracle.predict(0, -1, 0.1, Phase::train_w) == 1);
    CHECK(oracle.revealed(0) == 1);
    CHECK_THROWS_AS(oracle.predict(0, 1, 0.1, Phase::train_w), ProtocolViolation);
    CHECK_THROWS_AS(oracle.predict(5, 1, 0.1, Phase::train_w), ProtocolViolation);
    CHECK_THROWS_AS(oracle.predict(1, 0, 0.1, Phase::train_w), ProtocolViolation);
    CHECK(oracle.transcript().mistakes() == 1);
    CHECK(oracle.transcript().mistakes_in(Phase::train_v) == 0);
}

TEST_CASE("property: norm, correlation, tan and decay over random mistake triples") {
    RngStream root(2718);
    std::size_t checked = 0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        RngStream r = root.child(t);
        const std::size_t d = 2 + r.uniform_index(15);
        const Vector w_star = sample_sphere(d, r);
        const double th = 0.01 + (std::numbers::pi / 2 - 0.02) * r.uniform();
        const Vector w = (0.1 + 5 * r.uniform()) * (std::cos(th) * w_star + std::sin(th) * sample_orthogonal(w_star, r));
        const Vector x = sample_sphere(d, r);
        const Hypothesis h(w);
        const Hypothesis h2 = mp_update(h, x);
        CHECK(norm(h2.w()) <= norm(w) * (1 + 1e-15));
        if (oracle::dotp(w, x) * oracle::dotp(w_star, x) > 0) continue;
        ++checked;
        CHECK(oracle::dotp(h2.w(), w_star) >= oracle::dotp(w, w_star) - 1e-15);
        const double t0 = oracle::tan_by_projection(w, w_star);
        const double t1 = oracle::tan_by_projection(h2.w(), w_star);
        CHECK(t1 <= t0 * (1 + 1e-12));
        const double r_ratio = std::abs(oracle::dotp(w, x)) / (std::sin(th) * norm(w));
        CHECK(t1 * t1 <= (1 - r_ratio * r_ratio) * t0 * t0 + 1e-9);
    }
    CHECK(checked > 500);
}

TEST_CASE("property: update counts stay under the cap on adversarial sequences") {
    RngStream root(99);
    for (std::uint64_t t = 0; t < 1000; ++t) {
        RngStream r = root.child(t);
        const UpdateCountTrial tr = update_count_trial(2 + r.uniform_index(9), r);
        CHECK(tr.bound == oracle::update_cap(tr.alpha, tr.beta));
        CHECK(tr.updates <= tr.bound);
    }
}

}
