#pragma once

#include <optional>
#include <string_view>

namespace sphtail {

/// Outcome of a statistical or exact inequality check.  VIOLATED is only
/// reported when the evidence is conclusive at the requested level.
enum class Verdict { HOLDS, VIOLATED, INCONCLUSIVE };

constexpr std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::HOLDS: return "HOLDS";
        case Verdict::VIOLATED: return "VIOLATED";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

}  // namespace sphtail
