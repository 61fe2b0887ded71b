#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sdlc/geometry.hpp"
#include "sdlc/protocol.hpp"

namespace sdlc {

/// Nonzero weight vector with its norm cached.
class Hypothesis {
public:
    explicit Hypothesis(Vector w);

    const Vector& w() const noexcept { return w_; }
    double norm() const noexcept { return norm_; }
    std::size_t dim() const noexcept { return w_.dim(); }
    double margin(const Vector& x) const noexcept { return dot(w_, x); }
    int predict(const Vector& x) const noexcept { return sign_of(dot(w_, x)); }

private:
    Vector w_;
    double norm_;
};

struct UpdateRecord {
    std::size_t point_index;
    double margin; // |w.x| before the update
    // Only filled in when the ground truth was supplied.
    std::optional<double> r;
    std::optional<double> tan_before;
    std::optional<double> tan_after;
};

/// w - (w.x) x. Throws DegenerateHypothesis if the result has norm below 1e-300.
Hypothesis mp_update(const Hypothesis& h, const Vector& x);

/// The update the learners apply on a mistake: mp_update, except when w is
/// parallel to x (always the case in one dimension), where the margin update
/// would annihilate w and the reflection w - 2 (w.x) x is used instead.
Hypothesis corrective_update(const Hypothesis& h, const Vector& x);

/// (1 - r^2) tan^2(theta): the bound on tan^2 after an update with margin >= r sin(theta) |w|.
double decay_bound(double theta, double r);

struct PassResult {
    Hypothesis h;
    std::size_t predictions = 0;
    std::optional<UpdateRecord> update;
};

/// One margin-perceptron pass over U: predict in order of decreasing |w.x|
/// (ties by lower index), stop at the first mistake and update there.
/// `ground_truth` is used only to fill the diagnostic fields of the update.
PassResult margin_perceptron_pass(const std::vector<Vector>& points, std::span<const std::size_t> U,
                                  const Hypothesis& h, LabelOracle& oracle, Phase phase,
                                  const Vector* ground_truth = nullptr);

/// Indices of U sorted by decreasing |w.x|, ties by index.
std::vector<std::size_t> order_by_margin(const std::vector<Vector>& points, std::span<const std::size_t> U,
                                         const Vector& w);

/// (2 / beta^2) ln(1 / alpha)
double update_count_bound(double alpha, double beta);

} // namespace sdlc
