#pragma once

#include <cstddef>
#include <optional>

#include "sdlc/dataset.hpp"
#include "sdlc/margin_perceptron.hpp"
#include "sdlc/protocol.hpp"
#include "sdlc/rng.hpp"

namespace sdlc {

/// Learner driven by an external order: it exposes its hypothesis and is
/// told about each mistake.
class OnlineLearner {
public:
    virtual ~OnlineLearner() = default;
    virtual const Vector& hypothesis() const = 0;
    /// Called after a wrong prediction on x.
    virtual void on_mistake(const Vector& x, int truth) = 0;
};

/// Margin-perceptron learner: w <- w - (w.x) x on every mistake.
class MarginPerceptronLearner : public OnlineLearner {
public:
    explicit MarginPerceptronLearner(Hypothesis h) : h_(std::move(h)) {}
    const Vector& hypothesis() const override { return h_.w(); }
    void on_mistake(const Vector& x, int) override {
        h_ = corrective_update(h_, x);
        ++updates_;
    }
    std::size_t updates() const noexcept { return updates_; }

private:
    Hypothesis h_;
    std::size_t updates_ = 0;
};

struct BaselineConfig {
    // Run the same modified-perceptron initialization as the sphere learner
    // on the first points of the order before switching to margin updates.
    bool init_phase = true;
    double delta = 0.1;
    double c_init = 10.0;
    // Starting hypothesis; drawn uniformly on S_d when absent.
    std::optional<Vector> initial;
};

/// Points presented in a uniformly random order; margin-perceptron update on every mistake.
Transcript random_order_run(const LabeledDataset& ds, RngStream& rng, const BaselineConfig& cfg = {});

/// Always feeds the unpredicted point of smallest |w.x| (ties by index).
Transcript greedy_adversarial_order(const LabeledDataset& ds, OnlineLearner& learner);

} // namespace sdlc
