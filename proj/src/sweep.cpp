#include "sphtail/sweep.hpp"

#include "sphtail/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sphtail {

namespace {

double to_double(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("cannot parse number '" + std::string(text) + "'");
    }
    return v;
}

std::size_t to_count(std::string_view text) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
        throw std::invalid_argument("expected a positive integer, got '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

int verdict_rank(Verdict v) {
    switch (v) {
        case Verdict::HOLDS: return 0;
        case Verdict::INCONCLUSIVE: return 1;
        case Verdict::VIOLATED: return 2;
    }
    return 0;
}

}  // namespace

CoefficientPattern CoefficientPattern::equal(std::size_t n) {
    if (n == 0) throw std::invalid_argument("EQUAL pattern needs n >= 1");
    return {PatternKind::EQUAL, n, 0.0, {}};
}

CoefficientPattern CoefficientPattern::single() { return {PatternKind::SINGLE, 1, 0.0, {}}; }

CoefficientPattern CoefficientPattern::geometric(double ratio, std::size_t n) {
    if (n == 0) throw std::invalid_argument("GEOMETRIC pattern needs n >= 1");
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw std::invalid_argument("GEOMETRIC ratio must be positive");
    return {PatternKind::GEOMETRIC, n, ratio, {}};
}

CoefficientPattern CoefficientPattern::explicit_list(std::vector<double> entries) {
    CoefficientVector check(entries);  // validates
    const std::size_t n = entries.size();
    return {PatternKind::EXPLICIT, n, 0.0, std::move(entries)};
}

std::string CoefficientPattern::label() const {
    std::ostringstream os;
    switch (kind) {
        case PatternKind::EQUAL: os << "EQUAL(" << n << ")"; break;
        case PatternKind::SINGLE: os << "SINGLE"; break;
        case PatternKind::GEOMETRIC: os << "GEOMETRIC(" << ratio << "," << n << ")"; break;
        case PatternKind::EXPLICIT:
            os << "EXPLICIT(";
            for (std::size_t i = 0; i < entries.size(); ++i) os << (i ? ";" : "") << entries[i];
            os << ")";
            break;
    }
    return os.str();
}

CoefficientVector CoefficientPattern::coefficients(bool normalize) const {
    std::vector<double> a;
    switch (kind) {
        case PatternKind::EQUAL: a.assign(n, 1.0); break;
        case PatternKind::SINGLE: a = {1.0}; break;
        case PatternKind::GEOMETRIC:
            a.resize(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = std::pow(ratio, static_cast<double>(i));
            break;
        case PatternKind::EXPLICIT: a = entries; break;
    }
    CoefficientVector v(std::move(a));
    return normalize ? v.normalized() : v;
}

CoefficientPattern parse_pattern(std::string_view text) {
    const auto parts = split(text, ':');
    const std::string_view head = parts.front();
    if (head == "single" && parts.size() == 1) return CoefficientPattern::single();
    if (head == "equal" && parts.size() == 2) return CoefficientPattern::equal(to_count(parts[1]));
    if (head == "geometric" && parts.size() == 3) {
        return CoefficientPattern::geometric(to_double(parts[1]), to_count(parts[2]));
    }
    if (head == "explicit" && parts.size() == 2) {
        std::vector<double> entries;
        for (auto p : split(parts[1], ';')) entries.push_back(to_double(p));
        return CoefficientPattern::explicit_list(std::move(entries));
    }
    throw std::invalid_argument("unknown coefficient pattern '" + std::string(text) +
                                "' (expected single, equal:N, geometric:R:N or explicit:a;b;...)");
}

std::vector<double> default_quantile_levels() { return {0.5, 0.25, 0.1, 0.05, 0.01, 0.005, 0.001}; }

std::vector<double> UGrid::values(Dimension d, double scale_value) const {
    std::vector<double> u;
    if (spacing == Spacing::LINEAR) {
        if (count < 2 || !(max > min)) {
            throw std::invalid_argument("linear u grid needs count >= 2 and max > min");
        }
        for (std::size_t i = 0; i < count; ++i) {
            u.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1));
        }
        return u;
    }
    if (levels.size() < 2) {
        throw std::invalid_argument("quantile u grid needs at least 2 levels");
    }
    for (double level : levels) u.push_back(scale_value * chi_tail_quantile(d, level));
    return u;
}

Verdict judge(const McEstimate& lhs, const BoundResult& bound, BoundSemantics semantics) {
    const double limit = semantics == BoundSemantics::RAW ? bound.raw : bound.capped;
    if (lhs.ci_low > limit) return Verdict::VIOLATED;
    if (lhs.ci_high <= limit) return Verdict::HOLDS;
    return Verdict::INCONCLUSIVE;
}

std::uint64_t sweep_cost(const SweepSpec& spec) {
    return spec.samples * spec.dimensions.size() * spec.patterns.size() * spec.u_grid.size();
}

VerifyReport run_verify(const SweepSpec& spec) {
    if (spec.dimensions.empty() || spec.patterns.empty() || spec.constants.empty()) {
        throw std::invalid_argument("sweep needs at least one dimension, pattern and constant");
    }
    const std::uint64_t cost = sweep_cost(spec);
    if (cost > spec.budget) {
        throw CapacityError("sweep needs " + std::to_string(cost) + " sample-points, budget is " +
                            std::to_string(spec.budget));
    }
    std::vector<BoundConstant> constants;
    for (ConstantName name : spec.constants) constants.push_back(bound_constant(name));

    VerifyReport report;
    for (int d_value : spec.dimensions) {
        const Dimension d(d_value);
        for (const CoefficientPattern& pattern : spec.patterns) {
            const CoefficientVector coeffs = pattern.coefficients(spec.normalize);
            const double s = scale(coeffs, d);
            const std::vector<double> us = spec.u_grid.values(d, s);
            const std::vector<McEstimate> estimates =
                mc_tail_grid(d, coeffs, us, spec.samples, spec.seed, spec.alpha, spec.mc);
            for (std::size_t i = 0; i < us.size(); ++i) {
                VerificationRecord rec{d_value, pattern.label(), {coeffs.entries().begin(), coeffs.entries().end()},
                                       us[i], s, estimates[i], {}, 0.0, 0.0, 0.0, Verdict::HOLDS};
                const TailQuery q{d, coeffs, us[i]};
                for (const BoundConstant& c : constants) {
                    const BoundResult b = theorem_bound(q, c);
                    const Verdict v = judge(rec.lhs, b, spec.semantics);
                    rec.checks.push_back({b, v});
                    if (verdict_rank(v) > verdict_rank(rec.verdict)) rec.verdict = v;
                }
                rec.gaussian_tail = us[i] <= 0.0 ? 1.0 : chi_tail(d, us[i] / s);
                rec.ratio_upper = rec.lhs.ci_high / rec.gaussian_tail;
                rec.ratio_hat = rec.lhs.p_hat / rec.gaussian_tail;

                auto& sum = report.summary;
                switch (rec.verdict) {
                    case Verdict::HOLDS: ++sum.holds; break;
                    case Verdict::VIOLATED: ++sum.violated; break;
                    case Verdict::INCONCLUSIVE: ++sum.inconclusive; break;
                }
                sum.max_ratio_upper = std::max(sum.max_ratio_upper, rec.ratio_upper);
                sum.max_ratio_hat = std::max(sum.max_ratio_hat, rec.ratio_hat);
                report.records.push_back(std::move(rec));
            }
        }
    }
    return report;
}

}  // namespace sphtail
