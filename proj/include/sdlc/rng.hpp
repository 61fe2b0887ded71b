#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace sdlc {

/// Counter-based random stream (Philox4x32-10 keyed by the seed, with the
/// stream id occupying the upper half of the counter).
///
/// A stream is fully determined by (seed, stream_id) and the number of draws
/// taken so far, so sequences are bit-identical across runs and platforms.
/// Child streams are obtained by hashing a label into a fresh stream id;
/// they never share counter space with the parent.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Independent stream derived from this one's identity and `label`.
    /// Does not advance this stream.
    RngStream child(std::uint64_t label) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1).
    double uniform_open();
    /// Standard normal via Box-Muller (pairs are cached).
    double normal();
    /// Uniform integer in [0, bound), bound > 0; unbiased.
    std::uint64_t uniform_index(std::uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; used to derive stream ids from labels.
std::uint64_t mix64(std::uint64_t x) noexcept;

} // namespace sdlc
