#include "sphtail/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sphtail {

CoefficientVector::CoefficientVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw std::invalid_argument("coefficient vector must have at least one entry");
    }
    bool any_nonzero = false;
    for (double a : entries_) {
        if (!std::isfinite(a)) {
            throw std::invalid_argument("coefficients must be finite");
        }
        any_nonzero = any_nonzero || a != 0.0;
        sum_sq_ += a * a;
    }
    if (!any_nonzero) {
        throw std::invalid_argument("coefficients must not all be zero");
    }
    if (!std::isfinite(sum_sq_) || !(sum_sq_ > 0.0)) {
        throw std::invalid_argument("sum of squared coefficients must be finite and positive");
    }
}

double CoefficientVector::sum_of_fourth_powers() const noexcept {
    double s = 0.0;
    for (double a : entries_) s += a * a * a * a;
    return s;
}

CoefficientVector CoefficientVector::normalized() const {
    const double norm = std::sqrt(sum_sq_);
    std::vector<double> out(entries_);
    for (double& a : out) a /= norm;
    return CoefficientVector(std::move(out));
}

std::string_view to_string(ConstantName name) noexcept {
    switch (name) {
        case ConstantName::C3: return "C3";
        case ConstantName::C_STAR: return "C_STAR";
        case ConstantName::E_SQUARED: return "E_SQUARED";
        case ConstantName::NT397: return "NT397";
    }
    return "?";
}

std::optional<ConstantName> parse_constant_name(std::string_view text) {
    std::string key;
    for (char ch : text) {
        if (ch != '_' && ch != '-') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (key == "c3") return ConstantName::C3;
    if (key == "cstar") return ConstantName::C_STAR;
    if (key == "e2" || key == "esquared") return ConstantName::E_SQUARED;
    if (key == "nt397" || key == "397") return ConstantName::NT397;
    return std::nullopt;
}

BoundConstant bound_constant(ConstantName name) {
    switch (name) {
        case ConstantName::C3:
            return {name, 2.0 * std::exp(3.0) / 9.0};
        case ConstantName::C_STAR: {
            // P(|e1 + e2| >= 2) = 1/2 over P(|Z_1| >= sqrt 2) = 2 (1 - Phi(sqrt 2))
            const double gaussian_two_sided = 2.0 * (1.0 - phi_cdf(std::numbers::sqrt2));
            return {name, 0.5 / gaussian_two_sided};
        }
        case ConstantName::E_SQUARED:
            return {name, std::exp(2.0)};
        case ConstantName::NT397:
            return {name, 397.0};
    }
    throw std::invalid_argument("unknown constant");
}

std::vector<BoundConstant> constant_table() {
    return {bound_constant(ConstantName::C3), bound_constant(ConstantName::C_STAR),
            bound_constant(ConstantName::E_SQUARED), bound_constant(ConstantName::NT397)};
}

double scale(const CoefficientVector& coeffs, Dimension d) {
    return std::sqrt(coeffs.sum_of_squares() / d.as_double());
}

namespace {

BoundResult make_bound(Dimension d, double scale_value, double u, const BoundConstant& constant) {
    const double tail = u <= 0.0 ? 1.0 : chi_tail(d, u / scale_value);
    const double raw = constant.value * tail;
    return {constant, scale_value, raw, std::min(raw, 1.0)};
}

}  // namespace

BoundResult theorem_bound(const TailQuery& q, const BoundConstant& constant) {
    if (std::isnan(q.u)) {
        throw std::invalid_argument("threshold u must not be NaN");
    }
    return make_bound(q.d, scale(q.coeffs, q.d), q.u, constant);
}

BoundResult corollary_bound(Dimension d, const CoefficientVector& radius_bounds, double u,
                            const BoundConstant& constant, CorollaryScale variant) {
    for (std::size_t i = 0; i < radius_bounds.size(); ++i) {
        if (!(radius_bounds[i] > 0.0)) {
            throw std::invalid_argument("radius bound " + std::to_string(i) + " must be positive");
        }
    }
    if (std::isnan(u)) {
        throw std::invalid_argument("threshold u must not be NaN");
    }
    double s = std::sqrt(radius_bounds.sum_of_squares());
    if (variant == CorollaryScale::PER_DIMENSION) {
        s /= std::sqrt(d.as_double());
    }
    return make_bound(d, s, u, constant);
}

double g_lower(Dimension d) { return chi_tail(d, std::sqrt(d.as_double() + 2.0)); }

double q_lower(Dimension d) {
    const double dd = d.as_double();
    return phi_sf((std::sqrt(dd + 2.0) - std::sqrt(dd - 1.0)) * std::numbers::sqrt2);
}

}  // namespace sphtail
