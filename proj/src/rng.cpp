#include "sphtail/rng.hpp"

#include <cmath>

namespace sphtail {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

StreamEngine::StreamEngine(RngStream stream)
    : engine_(splitmix64(stream.seed ^ splitmix64(stream.stream_index + 0x632be59bd9b4e019ULL))) {}

double StreamEngine::uniform() {
    for (;;) {
        const double x = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (x > 0.0) return x;
    }
}

double StreamEngine::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double v1 = 0.0;
    double v2 = 0.0;
    double s = 0.0;
    do {
        v1 = 2.0 * uniform() - 1.0;
        v2 = 2.0 * uniform() - 1.0;
        s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * factor;
    has_spare_ = true;
    return v1 * factor;
}

}  // namespace sphtail
