#include "sdlc/protocol.hpp"

#include <algorithm>

#include "sdlc/errors.hpp"

namespace sdlc {

std::string to_string(Phase phase) {
    switch (phase) {
    case Phase::init: return "init";
    case Phase::train_w: return "train-w";
    case Phase::train_v: return "train-v";
    case Phase::cross_label: return "cross-label";
    case Phase::fallback: return "fallback";
    case Phase::weak: return "weak";
    case Phase::random_order: return "random-order";
    case Phase::adversarial: return "adversarial";
    }
    return "unknown";
}

std::size_t Transcript::mistakes() const noexcept {
    return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(),
                                                  [](const PredictionRecord& r) { return r.prediction != r.truth; }));
}

std::size_t Transcript::mistakes_in(Phase phase) const noexcept {
    return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [&](const PredictionRecord& r) {
        return r.phase == phase && r.prediction != r.truth;
    }));
}

std::vector<std::size_t> Transcript::indices() const {
    std::vector<std::size_t> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.index);
    return out;
}

LabelOracle::LabelOracle(const std::vector<int>& truths) : truths_(&truths), seen_(truths.size(), 0) {}

int LabelOracle::predict(std::size_t index, int prediction, double margin, Phase phase) {
    if (index >= truths_->size()) throw ProtocolViolation("prediction on unknown index " + std::to_string(index));
    if (prediction != 1 && prediction != -1) throw ProtocolViolation("prediction must be +1 or -1");
    if (seen_[index]) throw ProtocolViolation("index " + std::to_string(index) + " predicted twice");
    seen_[index] = 1;
    const int truth = (*truths_)[index];
    transcript_.append({index, prediction, truth, margin, phase});
    return truth;
}

int LabelOracle::revealed(std::size_t index) const {
    if (!predicted(index)) throw ProtocolViolation("label of index " + std::to_string(index) + " read before prediction");
    return (*truths_)[index];
}

} // namespace sdlc
