#pragma once

// Constants and closed-form evaluators for the tail comparison
//
//     P(||a_1 U_1 + ... + a_n U_n|| > u) <= c P(a ||Z_d|| > u),
//     a = sqrt((a_1^2 + ... + a_n^2) / d),
//
// together with the auxiliary lower-bound functions g(d) and q(d).

#include "sphtail/gaussian_chi.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sphtail {

/// Real weights a_1..a_n.  Entries must be finite and not all zero.
class CoefficientVector {
public:
    explicit CoefficientVector(std::vector<double> entries);
    CoefficientVector(std::initializer_list<double> entries)
        : CoefficientVector(std::vector<double>(entries)) {}

    std::span<const double> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }

    double sum_of_squares() const noexcept { return sum_sq_; }
    double sum_of_fourth_powers() const noexcept;

    /// Copy rescaled so that the squares sum to one.
    CoefficientVector normalized() const;

private:
    std::vector<double> entries_;
    double sum_sq_ = 0.0;
};

enum class ConstantName { C3, C_STAR, E_SQUARED, NT397 };

struct BoundConstant {
    ConstantName name;
    double value;
};

std::string_view to_string(ConstantName name) noexcept;

/// Accepts the canonical names and the short CLI spellings
/// (c3, cstar, e2, nt397), case-insensitively.
std::optional<ConstantName> parse_constant_name(std::string_view text);

/// Full-precision value.  C_STAR is computed from phi_cdf on every call.
BoundConstant bound_constant(ConstantName name);

/// All four constants in declaration order.
std::vector<BoundConstant> constant_table();

struct TailQuery {
    Dimension d;
    CoefficientVector coeffs;
    double u;
};

struct BoundResult {
    BoundConstant constant;
    double scale;   ///< Gaussian comparator scale
    double raw;     ///< constant * chi_tail(d, u / scale)
    double capped;  ///< min(raw, 1)
};

/// sqrt(sum a_i^2 / d).
double scale(const CoefficientVector& coeffs, Dimension d);

/// Right-hand side of the tail comparison for q.
BoundResult theorem_bound(const TailQuery& q, const BoundConstant& constant);

/// How the radii enter the bound for sums of bounded spherically invariant
/// vectors.  AS_PRINTED uses sqrt(sum b_i^2); PER_DIMENSION divides the sum by
/// d first, matching the scale of theorem_bound.
enum class CorollaryScale { AS_PRINTED, PER_DIMENSION };

BoundResult corollary_bound(Dimension d, const CoefficientVector& radius_bounds, double u,
                            const BoundConstant& constant,
                            CorollaryScale variant = CorollaryScale::PER_DIMENSION);

/// g(d) = P(||Z_d|| >= sqrt(d + 2)).
double g_lower(Dimension d);

/// q(d) = 1 - Phi((sqrt(d + 2) - sqrt(d - 1)) sqrt(2)).
double q_lower(Dimension d);

}  // namespace sphtail
