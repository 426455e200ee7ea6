#include "sphtail/moment_compare.hpp"

#include "sphtail/errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sphtail {

namespace {

using Integrator = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr unsigned kQuadratureDepth = 20;
constexpr double kQuadratureTol = 1e-13;

double two_sided_z(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - 0.5 * alpha);
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double parse_number(std::string_view text, std::string_view context) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw std::invalid_argument("cannot parse number '" + std::string(text) + "' in " + std::string(context));
    }
    return value;
}

std::string format_number(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

Verdict decide(double margin, double margin_se, bool both_exact, double magnitude, double z, bool& conclusive) {
    if (both_exact) {
        conclusive = true;
        return margin >= -1e-12 * std::max(1.0, magnitude) ? Verdict::HOLDS : Verdict::VIOLATED;
    }
    if (margin - z * margin_se > 0.0) {
        conclusive = true;
        return Verdict::HOLDS;
    }
    if (margin + z * margin_se < 0.0) {
        conclusive = true;
        return Verdict::VIOLATED;
    }
    conclusive = false;
    return Verdict::INCONCLUSIVE;
}

ComparisonVerdict make_verdict(const ValueEstimate& lhs, const ValueEstimate& rhs, double z,
                               std::optional<double> paired_se = std::nullopt) {
    ComparisonVerdict v{lhs, rhs, rhs.value - lhs.value, 0.0, false, Verdict::INCONCLUSIVE};
    v.margin_se = paired_se ? *paired_se : std::hypot(lhs.std_error, rhs.std_error);
    const double magnitude = std::max(std::abs(lhs.value), std::abs(rhs.value));
    v.verdict = decide(v.margin, v.margin_se, lhs.exact && rhs.exact, magnitude, z, v.conclusive);
    return v;
}

ValueEstimate exact_value(double x) { return {x, 0.0, true, 0}; }

ValueEstimate from_mc(const MeanEstimate& m) { return {m.mean, m.std_error, false, m.n_samples}; }

// E f(sum a_i U_i): closed form where available, Monte Carlo otherwise.
ValueEstimate sphere_sum_expectation(const TestFunction& f, const CoefficientVector& coeffs, Dimension d,
                                     const CompareOptions& options) {
    if (options.prefer_exact) {
        if (const auto p = f.exact_power()) {
            const double m = *p == 2 ? second_moment_exact(coeffs) : fourth_moment_exact(coeffs, d);
            return exact_value(f.multiplier() * m);
        }
    }
    const auto g = [&f](double r) { return f(r); };
    return from_mc(mc_norm_expectation(coeffs, d, g, options.samples, options.seed, options.mc));
}

CoefficientVector roots_of(const std::vector<double>& squares) {
    std::vector<double> out(squares.size());
    std::transform(squares.begin(), squares.end(), out.begin(), [](double s) { return std::sqrt(s); });
    return CoefficientVector(std::move(out));
}

void validate_t_grid(std::span<const double> t_grid) {
    if (t_grid.size() < 3) {
        throw std::invalid_argument("t grid needs at least 3 points");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i]) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
            throw std::invalid_argument("t grid must be positive, finite and strictly increasing");
        }
    }
}

// Weight of the left point when the middle point of a triple is written as a
// convex combination of the outer two.
double left_weight(double t1, double t2, double t3) { return (t3 - t2) / (t3 - t1); }

}  // namespace

// ---------------------------------------------------------------------------
// TestFunction

TestFunction TestFunction::power(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("power exponent must be positive and finite");
    }
    TestFunction f;
    f.kind_ = TestFunctionKind::POWER;
    f.parameter_ = p;
    return f;
}

TestFunction TestFunction::cosh(double lambda) {
    if (!std::isfinite(lambda)) {
        throw std::invalid_argument("cosh rate must be finite");
    }
    TestFunction f;
    f.kind_ = TestFunctionKind::COSH;
    f.parameter_ = lambda;
    return f;
}

TestFunction TestFunction::softplus_squared() {
    TestFunction f;
    f.kind_ = TestFunctionKind::SOFTPLUS_SQUARED;
    f.declared_even_ = false;
    return f;
}

TestFunction TestFunction::table(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() != values.size() || knots.size() < 2) {
        throw std::invalid_argument("table needs matching knot and value lists with at least 2 entries");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]) || !std::isfinite(values[i]) || (i > 0 && !(knots[i] > knots[i - 1]))) {
            throw std::invalid_argument("table knots must be finite and strictly increasing");
        }
    }
    TestFunction f;
    f.kind_ = TestFunctionKind::CUSTOM_TABLE;
    f.declared_even_ = false;
    f.domain_low_ = knots.front();
    f.domain_high_ = knots.back();
    f.knots_ = std::move(knots);
    f.values_ = std::move(values);
    return f;
}

TestFunction TestFunction::parse(std::string_view text) {
    bool negate = false;
    if (!text.empty() && text.front() == '-') {
        negate = true;
        text.remove_prefix(1);
    }
    TestFunction f = [&] {
        if (text.starts_with("power")) return power(parse_number(text.substr(5), "power exponent"));
        if (text.starts_with("cosh")) {
            const auto rest = text.substr(4);
            return cosh(rest.empty() ? 1.0 : parse_number(rest, "cosh rate"));
        }
        if (text == "softplus2" || text == "softplus_squared") return softplus_squared();
        throw std::invalid_argument("unknown test function '" + std::string(text) +
                                    "' (expected powerP, coshL or softplus2)");
    }();
    return negate ? f.negated() : f;
}

TestFunction TestFunction::negated() const {
    TestFunction f = *this;
    f.multiplier_ = -multiplier_;
    return f;
}

double TestFunction::operator()(double x) const {
    double base = 0.0;
    switch (kind_) {
        case TestFunctionKind::POWER:
            base = std::pow(std::abs(x), parameter_);
            break;
        case TestFunctionKind::COSH:
            base = std::cosh(parameter_ * x);
            break;
        case TestFunctionKind::SOFTPLUS_SQUARED: {
            const double s = softplus(x);
            base = s * s;
            break;
        }
        case TestFunctionKind::CUSTOM_TABLE: {
            if (x < domain_low_ || x > domain_high_) {
                throw std::domain_error("table function evaluated outside its knots");
            }
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
            const std::size_t hi = std::min<std::size_t>(it - knots_.begin(), knots_.size() - 1);
            const std::size_t lo = hi - 1;
            const double w = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
            base = values_[lo] + w * (values_[hi] - values_[lo]);
            break;
        }
    }
    return multiplier_ * base;
}

double TestFunction::radial(std::span<const double> x) const {
    double s = 0.0;
    for (double v : x) s += v * v;
    return (*this)(std::sqrt(s));
}

std::string TestFunction::label() const {
    std::string base;
    switch (kind_) {
        case TestFunctionKind::POWER: base = "power" + format_number(parameter_); break;
        case TestFunctionKind::COSH: base = "cosh" + format_number(parameter_); break;
        case TestFunctionKind::SOFTPLUS_SQUARED: base = "softplus2"; break;
        case TestFunctionKind::CUSTOM_TABLE: base = "table" + std::to_string(knots_.size()); break;
    }
    if (multiplier_ == 1.0) return base;
    if (multiplier_ == -1.0) return "-" + base;
    return format_number(multiplier_) + "*" + base;
}

std::optional<int> TestFunction::exact_power() const noexcept {
    if (kind_ != TestFunctionKind::POWER || !(multiplier_ > 0.0)) return std::nullopt;
    if (parameter_ == 2.0) return 2;
    if (parameter_ == 4.0) return 4;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Class C

std::vector<double> symmetric_grid(double half_width, std::size_t points_per_side) {
    if (!(half_width > 0.0) || points_per_side == 0) {
        throw std::invalid_argument("symmetric grid needs a positive width and at least one point per side");
    }
    std::vector<double> grid;
    grid.reserve(2 * points_per_side + 1);
    const double step = half_width / static_cast<double>(points_per_side);
    for (std::size_t i = points_per_side; i > 0; --i) grid.push_back(-step * static_cast<double>(i));
    grid.push_back(0.0);
    for (std::size_t i = 1; i <= points_per_side; ++i) grid.push_back(step * static_cast<double>(i));
    return grid;
}

ClassCReport is_class_c(const TestFunction& h, std::span<const double> grid_in, double tol) {
    std::vector<double> x(grid_in.begin(), grid_in.end());
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    const double width = n == 0 ? 0.0 : std::max(std::abs(x.front()), std::abs(x.back()));
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i]) || (i > 0 && !(x[i] > x[i - 1]))) {
            throw std::invalid_argument("class-C grid must be finite with distinct points");
        }
        if (std::abs(x[i] + x[n - 1 - i]) > 1e-12 * std::max(width, 1.0)) {
            throw std::invalid_argument("class-C grid must be symmetric about 0");
        }
    }
    ClassCReport report{ClassCStatus::NOT_MEMBER, false, false, 0.0, 0.0, std::nullopt, {}};
    if (n < 5) {
        report.status = ClassCStatus::GRID_TOO_COARSE;
        report.diagnostic = "grid has " + std::to_string(n) + " points; at least 5 are needed";
        return report;
    }

    std::vector<double> hx(n);
    double h_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        hx[i] = h(x[i]);
        h_scale = std::max(h_scale, std::abs(hx[i]));
    }
    h_scale = std::max(h_scale, std::numeric_limits<double>::min());

    report.even = true;
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double gap = std::abs(hx[i] - hx[n - 1 - i]) / h_scale;
        report.worst_evenness_gap = std::max(report.worst_evenness_gap, gap);
        if (gap > tol && report.even) {
            report.even = false;
            report.failure_location = x[n - 1 - i];
        }
    }

    // second divided differences: h'' at interior points
    std::vector<double> h2(n - 2);
    double h2_scale = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double right = (hx[i + 1] - hx[i]) / (x[i + 1] - x[i]);
        const double left = (hx[i] - hx[i - 1]) / (x[i] - x[i - 1]);
        h2[i - 1] = 2.0 * (right - left) / (x[i + 1] - x[i - 1]);
        h2_scale = std::max(h2_scale, std::abs(h2[i - 1]));
    }
    h2_scale = std::max(h2_scale, std::numeric_limits<double>::min());

    report.second_derivative_convex = true;
    std::optional<double> convexity_failure;
    for (std::size_t j = 1; j + 1 < h2.size(); ++j) {
        const double t1 = x[j], t2 = x[j + 1], t3 = x[j + 2];
        const double w = left_weight(t1, t2, t3);
        const double gap = (w * h2[j - 1] + (1.0 - w) * h2[j + 1] - h2[j]) / h2_scale;
        report.worst_convexity_gap = std::min(report.worst_convexity_gap, gap);
        if (gap < -tol && report.second_derivative_convex) {
            report.second_derivative_convex = false;
            convexity_failure = t2;
        }
    }
    if (report.even && report.second_derivative_convex) {
        report.status = ClassCStatus::MEMBER;
        report.diagnostic = "even with convex h'' on " + std::to_string(n) + " grid points";
    } else if (!report.even) {
        report.diagnostic = "not even: |h(x) - h(-x)| exceeds tolerance at x = " +
                            format_number(*report.failure_location);
    } else {
        report.failure_location = convexity_failure;
        report.diagnostic = "h'' not convex near x = " + format_number(*convexity_failure);
    }
    return report;
}

ClassCReport is_class_c(const TestFunction& h) {
    if (h.kind() == TestFunctionKind::CUSTOM_TABLE) {
        const auto k = h.knots();
        return is_class_c(h, std::vector<double>(k.begin(), k.end()));
    }
    return is_class_c(h, symmetric_grid(2.0, 20));
}

// ---------------------------------------------------------------------------
// Bisubharmonicity

std::string_view to_string(CheckOutcome outcome) noexcept {
    switch (outcome) {
        case CheckOutcome::PASS: return "PASS";
        case CheckOutcome::FAIL: return "FAIL";
        case CheckOutcome::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

double spherical_mean(const TestFunction& f, Dimension d, double y_norm, double t) {
    if (!(t >= 0.0) || !(y_norm >= 0.0)) {
        throw std::invalid_argument("spherical_mean needs t >= 0 and a nonnegative norm");
    }
    const double root_t = std::sqrt(t);
    if (d.value() == 1) {
        return 0.5 * (f(std::abs(y_norm + root_t)) + f(std::abs(y_norm - root_t)));
    }
    if (y_norm == 0.0) {
        return f(root_t);
    }
    // ||y + sqrt(t) U||^2 = |y|^2 + t + 2 sqrt(t) |y| cos(theta), where theta
    // has density proportional to sin^{d-2}(theta) on [0, pi].
    const double dd = d.as_double();
    const double base = y_norm * y_norm + t;
    const double cross = 2.0 * root_t * y_norm;
    auto integrand = [&](double theta) {
        const double r2 = std::max(0.0, base + cross * std::cos(theta));
        const double weight = d.value() == 2 ? 1.0 : std::pow(std::sin(theta), dd - 2.0);
        return f(std::sqrt(r2)) * weight;
    };
    const double normalizer = std::sqrt(std::numbers::pi) *
                              std::exp(boost::math::lgamma(0.5 * (dd - 1.0)) - boost::math::lgamma(0.5 * dd));
    return Integrator::integrate(integrand, 0.0, std::numbers::pi, kQuadratureDepth, kQuadratureTol) / normalizer;
}

BisubReport is_bisubharmonic_numeric(const TestFunction& f, Dimension d,
                                     const std::vector<std::vector<double>>& y_set,
                                     std::span<const double> t_grid, const BisubOptions& options) {
    validate_t_grid(t_grid);
    if (y_set.empty()) {
        throw std::invalid_argument("y set must be nonempty");
    }
    const auto dim = static_cast<std::size_t>(d.value());
    for (const auto& y : y_set) {
        if (y.size() != dim) {
            throw std::invalid_argument("every center y must have d coordinates");
        }
    }
    const std::size_t nt = t_grid.size();
    const std::size_t n_triples = nt - 2;

    BisubReport report{CheckOutcome::PASS, std::numeric_limits<double>::infinity(), 0, 1, 0, 0, {}};
    bool failed = false;

    auto record = [&](std::size_t yi, std::size_t ti, double rel_margin) {
        ++report.triples_checked;
        if (rel_margin < report.worst_margin) {
            report.worst_margin = rel_margin;
            report.worst_y = yi;
            report.worst_t = ti + 1;
        }
    };

    if (options.method == ConvexityMethod::QUADRATURE) {
        for (std::size_t yi = 0; yi < y_set.size(); ++yi) {
            double y_norm = 0.0;
            for (double v : y_set[yi]) y_norm += v * v;
            y_norm = std::sqrt(y_norm);
            std::vector<double> m(nt);
            for (std::size_t k = 0; k < nt; ++k) m[k] = spherical_mean(f, d, y_norm, t_grid[k]);
            for (std::size_t k = 0; k < n_triples; ++k) {
                const double w = left_weight(t_grid[k], t_grid[k + 1], t_grid[k + 2]);
                const double gap = w * m[k] + (1.0 - w) * m[k + 2] - m[k + 1];
                const double scale =
                    std::max({std::abs(m[k]), std::abs(m[k + 1]), std::abs(m[k + 2]), std::numeric_limits<double>::min()});
                record(yi, k, gap / scale);
                if (gap < -options.tol * scale) failed = true;
            }
        }
    } else {
        const double z = two_sided_z(options.alpha);
        const std::size_t n_y = y_set.size();
        std::vector<double> root_t(nt);
        for (std::size_t k = 0; k < nt; ++k) root_t[k] = std::sqrt(t_grid[k]);
        std::vector<double> y_sq(n_y, 0.0);
        for (std::size_t yi = 0; yi < n_y; ++yi) {
            for (double v : y_set[yi]) y_sq[yi] += v * v;
        }

        struct Accumulators {
            std::vector<detail::RunningStats> gap;  // n_y * n_triples
            std::vector<detail::RunningStats> value;  // n_y * nt
        };
        auto chunk = [&](StreamEngine& engine, std::uint64_t count) {
            Accumulators acc{std::vector<detail::RunningStats>(n_y * n_triples),
                             std::vector<detail::RunningStats>(n_y * nt)};
            std::vector<double> u(dim);
            std::vector<double> fv(nt);
            for (std::uint64_t s = 0; s < count; ++s) {
                fill_unit_vector(u, engine);
                for (std::size_t yi = 0; yi < n_y; ++yi) {
                    double yu = 0.0;
                    for (std::size_t j = 0; j < dim; ++j) yu += y_set[yi][j] * u[j];
                    for (std::size_t k = 0; k < nt; ++k) {
                        const double r2 = std::max(0.0, y_sq[yi] + t_grid[k] + 2.0 * root_t[k] * yu);
                        fv[k] = f(std::sqrt(r2));
                        acc.value[yi * nt + k].add(fv[k]);
                    }
                    for (std::size_t k = 0; k < n_triples; ++k) {
                        const double w = left_weight(t_grid[k], t_grid[k + 1], t_grid[k + 2]);
                        acc.gap[yi * n_triples + k].add(w * fv[k] + (1.0 - w) * fv[k + 2] - fv[k + 1]);
                    }
                }
            }
            return acc;
        };
        Accumulators total{std::vector<detail::RunningStats>(n_y * n_triples),
                           std::vector<detail::RunningStats>(n_y * nt)};
        for (const auto& a : detail::run_chunks<Accumulators>(options.samples, options.seed, options.mc, chunk)) {
            for (std::size_t i = 0; i < total.gap.size(); ++i) total.gap[i].merge(a.gap[i]);
            for (std::size_t i = 0; i < total.value.size(); ++i) total.value[i].merge(a.value[i]);
        }
        for (std::size_t yi = 0; yi < n_y; ++yi) {
            for (std::size_t k = 0; k < n_triples; ++k) {
                const auto& g = total.gap[yi * n_triples + k];
                const double scale = std::max({std::abs(total.value[yi * nt + k].mean),
                                               std::abs(total.value[yi * nt + k + 1].mean),
                                               std::abs(total.value[yi * nt + k + 2].mean),
                                               std::numeric_limits<double>::min()});
                const double slack = options.mc_rel_tol * scale;
                const double lower = g.mean - z * g.std_error();
                const double upper = g.mean + z * g.std_error();
                record(yi, k, g.mean / scale);
                if (upper < -slack) {
                    failed = true;
                } else if (lower < -slack) {
                    ++report.inconclusive_triples;
                }
            }
        }
    }

    std::ostringstream msg;
    if (failed) {
        report.outcome = CheckOutcome::FAIL;
        msg << "t -> E f(y + U sqrt t) not convex for y #" << report.worst_y << " around t = "
            << t_grid[report.worst_t] << " (relative gap " << report.worst_margin << ")";
    } else if (report.inconclusive_triples > 0) {
        report.outcome = CheckOutcome::INCONCLUSIVE;
        msg << report.inconclusive_triples << " of " << report.triples_checked
            << " triples have confidence intervals wider than the convexity margin";
    } else {
        msg << "convex on all " << report.triples_checked << " triples (worst relative gap "
            << report.worst_margin << ")";
    }
    report.diagnostic = msg.str();
    return report;
}

// ---------------------------------------------------------------------------
// Majorization

MajorizationResult check_majorization(const MajorizationPair& pair) {
    if (pair.a_sq.size() != pair.b_sq.size()) {
        throw std::invalid_argument("majorization pair must have equal lengths");
    }
    if (pair.a_sq.empty()) {
        throw std::invalid_argument("majorization pair must be nonempty");
    }
    for (const auto* v : {&pair.a_sq, &pair.b_sq}) {
        for (double x : *v) {
            if (!(x >= 0.0) || !std::isfinite(x)) {
                throw std::invalid_argument("squared coefficients must be finite and nonnegative");
            }
        }
    }
    std::vector<double> a = pair.a_sq;
    std::vector<double> b = pair.b_sq;
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());

    MajorizationResult result{true, true, std::nullopt};
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sa += a[k];
        sb += b[k];
        const double tol = 1e-12 * std::max(1.0, std::max(sa, sb));
        if (k + 1 < a.size() && sb > sa + tol && !result.failed_index) {
            result.failed_index = k;
            result.majorizes = false;
        }
    }
    if (std::abs(sa - sb) > 1e-12 * std::max(1.0, std::max(sa, sb))) {
        result.sums_equal = false;
        result.majorizes = false;
    }
    return result;
}

bool schur_majorizes(const MajorizationPair& pair) { return check_majorization(pair).majorizes; }

// ---------------------------------------------------------------------------
// Moment comparisons

void certify_bisubharmonic(const TestFunction& f, Dimension d) {
    if (f.exact_power()) return;
    // h in class C makes h(||x||) bisubharmonic
    if (f.kind() != TestFunctionKind::CUSTOM_TABLE && is_class_c(f).member()) return;

    const auto dim = static_cast<std::size_t>(d.value());
    std::vector<std::vector<double>> y_set(3, std::vector<double>(dim, 0.0));
    y_set[1][0] = 0.5;
    y_set[2][0] = 1.5;
    std::vector<double> t_grid;
    for (int k = 1; k <= 16; ++k) t_grid.push_back(0.25 * k);
    const BisubReport bisub = is_bisubharmonic_numeric(f, d, y_set, t_grid);
    if (bisub.outcome != CheckOutcome::PASS) {
        throw PreconditionError("test function " + f.label() + " is not certified bisubharmonic: " +
                                bisub.diagnostic);
    }
}

double gaussian_norm_expectation(const TestFunction& h, Dimension d, double scale_value) {
    if (!(scale_value > 0.0) || !std::isfinite(scale_value)) {
        throw std::invalid_argument("Gaussian scale must be positive and finite");
    }
    if (h.kind() == TestFunctionKind::POWER) {
        return h.multiplier() * std::pow(scale_value, h.parameter()) * chi_moment(d, h.parameter());
    }
    auto integrand = [&](double r) {
        const double density = chi_density(d, r);
        return density == 0.0 ? 0.0 : h(scale_value * r) * density;
    };
    if (h.kind() == TestFunctionKind::CUSTOM_TABLE) {
        const double r_max = h.domain_high() / scale_value;
        if (h.domain_low() > 0.0 || chi_tail(d, r_max) > 1e-12) {
            throw std::domain_error("table does not cover the bulk of the chi distribution");
        }
        return Integrator::integrate(integrand, 0.0, r_max, kQuadratureDepth, kQuadratureTol);
    }
    return Integrator::integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), kQuadratureDepth,
                                 kQuadratureTol);
}

ComparisonVerdict bc_comparison_check(const TestFunction& f, const MajorizationPair& pair, Dimension d,
                                      const CompareOptions& options) {
    const MajorizationResult maj = check_majorization(pair);
    if (!maj.sums_equal) {
        throw PreconditionError("sums of a_sq and b_sq differ");
    }
    if (!maj.majorizes) {
        throw PreconditionError("b_sq is not majorized by a_sq: partial sum " +
                                    std::to_string(*maj.failed_index + 1) + " of b_sq exceeds that of a_sq",
                                maj.failed_index);
    }
    certify_bisubharmonic(f, d);

    const CoefficientVector a = roots_of(pair.a_sq);
    const CoefficientVector b = roots_of(pair.b_sq);
    const double z = two_sided_z(options.alpha);

    if (options.prefer_exact && f.exact_power()) {
        return make_verdict(sphere_sum_expectation(f, a, d, options), sphere_sum_expectation(f, b, d, options), z);
    }
    const auto g = [&f](double r) { return f(r); };
    const PairedEstimate est = mc_paired_norm_expectation(a, b, d, g, options.samples, options.seed, options.mc);
    return make_verdict(from_mc(est.lhs), from_mc(est.rhs), z, est.difference.std_error);
}

ComparisonVerdict gaussian_comparison_check(const TestFunction& f, const CoefficientVector& coeffs, Dimension d,
                                            const CompareOptions& options) {
    certify_bisubharmonic(f, d);
    const double z = two_sided_z(options.alpha);
    const ValueEstimate lhs = sphere_sum_expectation(f, coeffs, d, options);
    const bool closed_form = f.kind() == TestFunctionKind::POWER;
    const double rhs = gaussian_norm_expectation(f, d, scale(coeffs, d));
    // quadrature error is far below any Monte Carlo error on the other side
    return make_verdict(lhs, {rhs, 0.0, closed_form, 0}, z);
}

std::string_view to_string(HypothesisStatus status) noexcept {
    switch (status) {
        case HypothesisStatus::CONSISTENT: return "CONSISTENT";
        case HypothesisStatus::VIOLATED: return "VIOLATED";
        case HypothesisStatus::NOT_CLASS_C: return "NOT_CLASS_C";
    }
    return "?";
}

std::vector<HypothesisResult> lemma2_hypothesis_check(std::span<const double> xi_samples, Dimension d,
                                                      const std::vector<TestFunction>& h_suite, double alpha) {
    if (xi_samples.empty()) {
        throw std::invalid_argument("xi sample set must be nonempty");
    }
    for (double x : xi_samples) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument("xi samples must be finite and nonnegative");
        }
    }
    const double z = two_sided_z(alpha);
    std::vector<HypothesisResult> out;
    out.reserve(h_suite.size());
    for (const TestFunction& h : h_suite) {
        HypothesisResult result{h.label(), HypothesisStatus::NOT_CLASS_C, is_class_c(h), std::nullopt};
        if (!result.class_c.member()) {
            out.push_back(std::move(result));
            continue;
        }
        detail::RunningStats stats;
        for (double x : xi_samples) stats.add(h(x));
        const ValueEstimate lhs{stats.mean, stats.std_error(), false, stats.n};
        const double rhs = gaussian_norm_expectation(h, d);
        ComparisonVerdict v = make_verdict(lhs, {rhs, 0.0, h.kind() == TestFunctionKind::POWER, 0}, z);
        result.status = v.verdict == Verdict::VIOLATED ? HypothesisStatus::VIOLATED : HypothesisStatus::CONSISTENT;
        result.comparison = v;
        out.push_back(std::move(result));
    }
    return out;
}

ComparisonVerdict kwapien_check(const CoefficientVector& coeffs, Dimension d, double p,
                                const CompareOptions& options, const KwapienOptions& kwapien) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("moment order must be finite and nonnegative");
    }
    if (p < 3.0 && !kwapien.allow_below_three) {
        throw PreconditionError("moment comparison is only established for p >= 3 (got " + format_number(p) + ")");
    }
    const double z = two_sided_z(options.alpha);
    const double rhs = std::pow(coeffs.sum_of_squares(), 0.5 * p) * chi_moment(d, p);
    ValueEstimate lhs{};
    if (options.prefer_exact && (p == 2.0 || p == 4.0)) {
        lhs = exact_value(p == 2.0 ? second_moment_exact(coeffs) : fourth_moment_exact(coeffs, d));
    } else {
        lhs = from_mc(mc_moment(coeffs, d, p, options.samples, options.seed, options.mc));
    }
    return make_verdict(lhs, exact_value(rhs), z);
}

}  // namespace sphtail
