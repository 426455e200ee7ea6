#pragma once

#include <cstdint>
#include <random>

namespace sphtail {

/// Identifies one reproducible random sequence.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

/// Generator for a single RngStream.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard,
/// and on hand-written uniform/normal transforms (the std distributions are
/// implementation-defined).  The same RngStream therefore yields the same
/// draws with any conforming standard library.
class StreamEngine {
public:
    explicit StreamEngine(RngStream stream);

    /// Uniform on the open interval (0, 1), 53 random bits.
    double uniform();

    /// Standard normal, Marsaglia polar method.
    double normal();

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to decorrelate (seed, stream_index) pairs.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace sphtail
