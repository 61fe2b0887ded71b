#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sdlc {

enum class Phase { init, train_w, train_v, cross_label, fallback, weak, random_order, adversarial };

std::string to_string(Phase phase);

struct PredictionRecord {
    std::size_t index;
    int prediction;
    int truth;
    double margin; // |w.x| at prediction time
    Phase phase;
};

/// Ordered prediction log. The mistake count is always derived from the records.
class Transcript {
public:
    void append(const PredictionRecord& r) { records_.push_back(r); }
    const std::vector<PredictionRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    std::size_t mistakes() const noexcept;
    std::size_t mistakes_in(Phase phase) const noexcept;
    /// Indices in prediction order.
    std::vector<std::size_t> indices() const;

private:
    std::vector<PredictionRecord> records_;
};

/// Label oracle of the self-directed protocol: the learner names a point and
/// a prediction, and only then is the true label revealed. Predicting the
/// same point twice is a protocol violation.
class LabelOracle {
public:
    explicit LabelOracle(const std::vector<int>& truths);

    /// Logs the prediction and returns the revealed truth.
    int predict(std::size_t index, int prediction, double margin, Phase phase);

    bool predicted(std::size_t index) const { return seen_.at(index) != 0; }
    /// Truth of a point that has already been predicted.
    int revealed(std::size_t index) const;

    std::size_t size() const noexcept { return truths_->size(); }
    std::size_t predictions() const noexcept { return transcript_.size(); }
    const Transcript& transcript() const noexcept { return transcript_; }
    Transcript release() { return std::move(transcript_); }

private:
    const std::vector<int>* truths_;
    std::vector<char> seen_;
    Transcript transcript_;
};

} // namespace sdlc
