#pragma once

// Verification sweeps: Monte Carlo estimates of the left-hand tail against
// the closed-form bound over a grid of dimensions, coefficient patterns and
// thresholds.

#include "sphtail/bounds.hpp"
#include "sphtail/sampling.hpp"
#include "sphtail/verdict.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sphtail {

enum class PatternKind { EQUAL, SINGLE, GEOMETRIC, EXPLICIT };

struct CoefficientPattern {
    PatternKind kind = PatternKind::SINGLE;
    std::size_t n = 1;
    double ratio = 0.5;
    std::vector<double> entries;  ///< EXPLICIT only

    static CoefficientPattern equal(std::size_t n);
    static CoefficientPattern single();
    static CoefficientPattern geometric(double ratio, std::size_t n);
    static CoefficientPattern explicit_list(std::vector<double> entries);

    /// EQUAL(5), SINGLE, GEOMETRIC(0.5,5), EXPLICIT(1;2;3)
    std::string label() const;

    /// (1,...,1), (1), (1, r, r^2, ...), or the explicit list; optionally
    /// rescaled to unit sum of squares.
    CoefficientVector coefficients(bool normalize) const;
};

/// Parses "equal:N", "single", "geometric:R:N" and "explicit:a;b;c".
CoefficientPattern parse_pattern(std::string_view text);

enum class Spacing { LINEAR, QUANTILE };

/// Tail levels of the Gaussian comparator used by quantile spacing.
std::vector<double> default_quantile_levels();

/// Thresholds of a sweep.  LINEAR places `count` points on [min, max].
/// QUANTILE places u = scale * chi_tail_quantile(d, level) for each level, so
/// P(scale ||Z_d|| > u) runs through `levels`.
struct UGrid {
    Spacing spacing = Spacing::QUANTILE;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
    std::vector<double> levels = default_quantile_levels();

    std::size_t size() const noexcept { return spacing == Spacing::LINEAR ? count : levels.size(); }
    std::vector<double> values(Dimension d, double scale) const;
};

/// Whether a verdict compares the tail against the raw product c * P(...) or
/// against min(1, c * P(...)).
enum class BoundSemantics { RAW, CAPPED };

struct SweepSpec {
    std::vector<int> dimensions;
    std::vector<CoefficientPattern> patterns;
    UGrid u_grid;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    double alpha = 0.01;
    bool normalize = true;
    std::vector<ConstantName> constants{ConstantName::C3};
    BoundSemantics semantics = BoundSemantics::RAW;
    std::uint64_t budget = 100'000'000;
    McOptions mc{};
};

struct ConstantCheck {
    BoundResult bound;
    Verdict verdict;
};

struct VerificationRecord {
    int d;
    std::string pattern;
    std::vector<double> coeffs;
    double u;
    double scale;
    McEstimate lhs;
    std::vector<ConstantCheck> checks;  ///< one per SweepSpec::constants entry
    double gaussian_tail;               ///< chi_tail(d, u / scale)
    double ratio_upper;                 ///< lhs.ci_high / gaussian_tail
    double ratio_hat;                   ///< lhs.p_hat / gaussian_tail
    Verdict verdict;                    ///< worst verdict over checks
};

struct VerificationSummary {
    std::size_t holds = 0;
    std::size_t violated = 0;
    std::size_t inconclusive = 0;
    double max_ratio_upper = 0.0;
    double max_ratio_hat = 0.0;
};

struct VerifyReport {
    std::vector<VerificationRecord> records;
    VerificationSummary summary;
};

/// HOLDS when ci_high <= bound, VIOLATED when ci_low > bound, otherwise
/// INCONCLUSIVE.
Verdict judge(const McEstimate& lhs, const BoundResult& bound, BoundSemantics semantics);

/// samples * number of (d, pattern, u) points.
std::uint64_t sweep_cost(const SweepSpec& spec);

/// Runs the sweep.  Throws CapacityError when sweep_cost exceeds the budget.
VerifyReport run_verify(const SweepSpec& spec);

}  // namespace sphtail
