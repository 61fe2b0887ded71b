#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sdlc/dataset.hpp"
#include "sdlc/margin_perceptron.hpp"
#include "sdlc/protocol.hpp"
#include "sdlc/rng.hpp"

namespace sdlc {

struct SphereSchedule {
    std::size_t T = 1; // update budget per arm
    std::size_t k = 1; // buckets per arm
    std::size_t N = 1; // nominal bucket size floor(n / 2k)
    double c_prime = 4.0;
    double delta = 0.1;
};

/// T = ceil(c' d max(ln ln n, 1) ln(1/delta)), clamped to n/2; k = T clamped
/// to n/4 so that the buckets stay nonempty after the initialization prefix.
SphereSchedule make_schedule(std::size_t n, std::size_t d, double delta, double c_prime = 4.0);

struct SphereConfig {
    double delta = 0.1;
    double c_prime = 4.0;
    double c_init = 10.0;
    // Track tan(theta(w, w*)) per arm; needs the dataset's ground truth.
    bool instrumented = false;
    // Replaces make_schedule(n, d, delta, c_prime). Data smaller than 2k after
    // the initialization runs a single max-margin arm instead.
    std::optional<SphereSchedule> schedule;
};

/// min(n/4, ceil(50 d ln(1/delta))), at least 1.
std::size_t init_prefix_size(std::size_t n, std::size_t d, double delta);
/// ceil(c_init d ln(1/delta))
std::size_t init_mistake_budget(std::size_t d, double delta, double c_init);

struct InitResult {
    Hypothesis h;
    std::size_t mistakes = 0;
    std::size_t consumed = 0; // prefix points actually predicted
};

/// Modified perceptron w <- w - 2 (w.x) x on each mistake, over `prefix` in
/// the given order, until the mistake budget is spent or the prefix runs out.
InitResult initialize_hypothesis(const std::vector<Vector>& points, std::span<const std::size_t> prefix,
                                 const Hypothesis& w0, std::size_t mistake_budget, LabelOracle& oracle,
                                 Phase phase = Phase::init);
/// Same, starting from a uniform draw on S_d.
InitResult initialize_hypothesis(const std::vector<Vector>& points, std::span<const std::size_t> prefix,
                                 std::size_t d, double delta, double c_init, LabelOracle& oracle, RngStream& rng);

struct SphereRunResult {
    Transcript transcript;
    SphereSchedule schedule;
    bool fallback = false;
    std::size_t init_mistakes = 0;
    std::size_t updates_w = 0;
    std::size_t updates_v = 0;
    Vector final_w;
    Vector final_v;
    // Instrumented mode: tan(theta(., w*)) after initialization and after every update.
    std::vector<double> tan_trace_w;
    std::vector<double> tan_trace_v;
    // Per point: 0 initialization or fallback, 1 a w-arm bucket, 2 a v-arm bucket.
    std::vector<unsigned char> arm;
};

/// Two-arm self-directed learner for data on the sphere. Labels are read
/// only through a LabelOracle; the ground truth is touched only in
/// instrumented mode.
SphereRunResult run_sphere(const LabeledDataset& ds, const SphereConfig& cfg, RngStream& rng);

} // namespace sdlc
