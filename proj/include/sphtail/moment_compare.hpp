#pragma once

// Testable forms of the structural hypotheses behind the tail comparison:
// class-C membership, bisubharmonicity through convexity of
// t -> E f(y + U sqrt(t)), Schur majorization, and the moment comparisons
// between sphere sums and the Gaussian comparator.
//
// A finite suite of test functions can never certify a "for all h"
// statement; the checks here report agreement or conclusive violation only.

#include "sphtail/bounds.hpp"
#include "sphtail/gaussian_chi.hpp"
#include "sphtail/sampling.hpp"
#include "sphtail/verdict.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sphtail {

enum class TestFunctionKind { POWER, COSH, SOFTPLUS_SQUARED, CUSTOM_TABLE };

/// A scalar function h, used either directly or through its radial form
/// f(x) = h(||x||).  Every kind carries a multiplier so that negations can be
/// expressed (e.g. -|x|^4).
///
///   POWER(p)          h(x) = |x|^p
///   COSH(l)           h(x) = cosh(l x)
///   SOFTPLUS_SQUARED  h(x) = log(1 + e^x)^2   (not even)
///   CUSTOM_TABLE      piecewise-linear interpolation of (knot, value) pairs
class TestFunction {
public:
    static TestFunction power(double p);
    static TestFunction cosh(double lambda);
    static TestFunction softplus_squared();
    static TestFunction table(std::vector<double> knots, std::vector<double> values);

    /// "power4", "power2.5", "cosh0.5", "softplus2", optionally prefixed with
    /// '-' for the negation.  Throws std::invalid_argument otherwise.
    static TestFunction parse(std::string_view text);

    TestFunction negated() const;

    double operator()(double x) const;
    double radial(std::span<const double> x) const;

    TestFunctionKind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    double multiplier() const noexcept { return multiplier_; }
    bool declared_even() const noexcept { return declared_even_; }
    double domain_low() const noexcept { return domain_low_; }
    double domain_high() const noexcept { return domain_high_; }
    std::span<const double> knots() const noexcept { return knots_; }

    std::string label() const;

    /// 2 or 4 for positive multiples of |x|^2 and |x|^4, whose sphere-sum
    /// moments have closed forms.
    std::optional<int> exact_power() const noexcept;

private:
    TestFunction() = default;

    TestFunctionKind kind_ = TestFunctionKind::POWER;
    double parameter_ = 0.0;
    double multiplier_ = 1.0;
    bool declared_even_ = true;
    double domain_low_ = -std::numeric_limits<double>::infinity();
    double domain_high_ = std::numeric_limits<double>::infinity();
    std::vector<double> knots_;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Class C

enum class ClassCStatus { MEMBER, NOT_MEMBER, GRID_TOO_COARSE };

struct ClassCReport {
    ClassCStatus status;
    bool even;
    bool second_derivative_convex;
    double worst_evenness_gap;   ///< max |h(x) - h(-x)| / scale of h
    double worst_convexity_gap;  ///< most negative convexity gap of h'' / scale of h''
    std::optional<double> failure_location;
    std::string diagnostic;

    bool member() const noexcept { return status == ClassCStatus::MEMBER; }
};

/// `points_per_side` equally spaced points on each side of 0, plus 0.
std::vector<double> symmetric_grid(double half_width, std::size_t points_per_side);

/// Checks evenness and convexity of a finite-difference h'' on `grid`.  The
/// grid must be symmetric about 0 (std::invalid_argument otherwise); fewer
/// than five points yields GRID_TOO_COARSE.
ClassCReport is_class_c(const TestFunction& h, std::span<const double> grid, double tol = 1e-6);

/// Uses the table knots for CUSTOM_TABLE and symmetric_grid(2, 20) otherwise.
ClassCReport is_class_c(const TestFunction& h);

// ---------------------------------------------------------------------------
// Bisubharmonicity

enum class CheckOutcome { PASS, FAIL, INCONCLUSIVE };

std::string_view to_string(CheckOutcome outcome) noexcept;

enum class ConvexityMethod { QUADRATURE, MONTE_CARLO };

struct BisubOptions {
    ConvexityMethod method = ConvexityMethod::QUADRATURE;
    double tol = 1e-9;         ///< quadrature: allowed negative gap relative to |m|
    std::uint64_t samples = 200000;
    std::uint64_t seed = 1;
    double alpha = 0.01;
    double mc_rel_tol = 1e-3;  ///< Monte Carlo: gap slack relative to |m|
    McOptions mc{};
};

struct BisubReport {
    CheckOutcome outcome;
    double worst_margin;       ///< smallest convexity gap, relative to |m|
    std::size_t worst_y;
    std::size_t worst_t;       ///< index of the middle point of the worst triple
    std::size_t triples_checked;
    std::size_t inconclusive_triples;
    std::string diagnostic;
};

/// m(t) = E f(y + U sqrt(t)) for radial f, ||y|| = y_norm, by quadrature over
/// the law of the first coordinate of U.
double spherical_mean(const TestFunction& f, Dimension d, double y_norm, double t);

/// Checks convexity of t -> E f(y + U sqrt(t)) on consecutive triples of
/// `t_grid` for every y.  Needs >= 3 increasing positive t values and a
/// nonempty y_set whose vectors have d coordinates.
BisubReport is_bisubharmonic_numeric(const TestFunction& f, Dimension d,
                                     const std::vector<std::vector<double>>& y_set,
                                     std::span<const double> t_grid, const BisubOptions& options = {});

// ---------------------------------------------------------------------------
// Majorization and moment comparisons

struct MajorizationPair {
    std::vector<double> a_sq;
    std::vector<double> b_sq;
};

struct MajorizationResult {
    bool majorizes;
    bool sums_equal;
    std::optional<std::size_t> failed_index;  ///< first partial sum where b exceeds a
};

/// Throws std::invalid_argument on length mismatch or negative entries.
MajorizationResult check_majorization(const MajorizationPair& pair);

/// True iff b_sq is majorized by a_sq.
bool schur_majorizes(const MajorizationPair& pair);

struct ValueEstimate {
    double value;
    double std_error;
    bool exact;
    std::uint64_t n_samples;
};

struct ComparisonVerdict {
    ValueEstimate lhs;
    ValueEstimate rhs;
    double margin;     ///< rhs - lhs
    double margin_se;
    bool conclusive;
    Verdict verdict;
};

struct CompareOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    double alpha = 0.01;
    bool prefer_exact = true;  ///< use closed forms for |x|^2, |x|^4 when possible
    McOptions mc{};
};

/// Throws PreconditionError unless f is a positive multiple of |x|^2 or
/// |x|^4, has a class-C profile, or passes the numeric convexity test.
void certify_bisubharmonic(const TestFunction& f, Dimension d);

/// E h(scale ||Z_d||): closed form for POWER, quadrature against the chi
/// density otherwise.
double gaussian_norm_expectation(const TestFunction& h, Dimension d, double scale = 1.0);

/// E f(sum a_i U_i) <= E f(sum b_i U_i) with a_i = sqrt(a_sq_i),
/// b_i = sqrt(b_sq_i).  Monte Carlo uses the same U_i on both sides.
ComparisonVerdict bc_comparison_check(const TestFunction& f, const MajorizationPair& pair, Dimension d,
                                      const CompareOptions& options = {});

/// E f(sum a_i U_i) <= E f(a Z_d), a = scale(coeffs, d).
ComparisonVerdict gaussian_comparison_check(const TestFunction& f, const CoefficientVector& coeffs,
                                            Dimension d, const CompareOptions& options = {});

enum class HypothesisStatus { CONSISTENT, VIOLATED, NOT_CLASS_C };

std::string_view to_string(HypothesisStatus status) noexcept;

struct HypothesisResult {
    std::string label;
    HypothesisStatus status;
    ClassCReport class_c;
    std::optional<ComparisonVerdict> comparison;
};

/// Empirical E h(xi) against E h(||Z_d||) for each h of the suite.
std::vector<HypothesisResult> lemma2_hypothesis_check(std::span<const double> xi_samples, Dimension d,
                                                      const std::vector<TestFunction>& h_suite,
                                                      double alpha = 0.01);

struct KwapienOptions {
    bool allow_below_three = false;
};

/// E ||sum a_i U_i||^p <= (sum a_i^2)^{p/2} E ||Z_d||^p for p >= 3.
ComparisonVerdict kwapien_check(const CoefficientVector& coeffs, Dimension d, double p,
                                const CompareOptions& options = {}, const KwapienOptions& kwapien = {});

}  // namespace sphtail
