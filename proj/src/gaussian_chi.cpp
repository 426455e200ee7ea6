#include "sphtail/gaussian_chi.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sphtail {

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kTiny = 1e-300;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(what) + ": argument must be finite");
    }
}

double log_gamma(double a) { return boost::math::lgamma(a); }

// log of x^a e^{-x} / Gamma(a)
double log_prefactor(double a, double x) { return a * std::log(x) - x - log_gamma(a); }

// Lower regularized P(a, x) by its power series; intended for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIterations; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum * std::exp(log_prefactor(a, x));
}

// Continued fraction part of Q(a, x) (modified Lentz); Q = prefactor * cf.
double gamma_q_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return h;
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::domain_error("incomplete gamma: shape must be positive and finite");
    }
    if (std::isnan(x) || x < 0.0) {
        throw std::domain_error("incomplete gamma: argument must be nonnegative");
    }
}

}  // namespace

Dimension::Dimension(int d) : d_(d) {
    if (d < 1) {
        throw std::invalid_argument("dimension must be >= 1, got " + std::to_string(d));
    }
}

namespace detail {

double gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) {
        return 1.0 - gamma_p_series(a, x);
    }
    return std::exp(log_prefactor(a, x)) * gamma_q_fraction(a, x);
}

double log_gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) {
        return std::log1p(-gamma_p_series(a, x));
    }
    return log_prefactor(a, x) + std::log(gamma_q_fraction(a, x));
}

}  // namespace detail

double phi_cdf(double x) {
    require_finite(x, "phi_cdf");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double phi_sf(double x) {
    require_finite(x, "phi_sf");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double chi_tail(Dimension d, double u) {
    require_finite(u, "chi_tail");
    if (u <= 0.0) return 1.0;
    return detail::gamma_q(0.5 * d.as_double(), 0.5 * u * u);
}

LogProb chi_tail_log(Dimension d, double u) {
    require_finite(u, "chi_tail_log");
    if (u <= 0.0) return {0.0};
    return {detail::log_gamma_q(0.5 * d.as_double(), 0.5 * u * u)};
}

double chi_moment(Dimension d, double p) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::domain_error("chi_moment: order must be finite and >= 0");
    }
    if (p == 0.0) return 1.0;
    const double half_d = 0.5 * d.as_double();
    return std::exp(0.5 * p * std::numbers::ln2 + log_gamma(half_d + 0.5 * p) - log_gamma(half_d));
}

double chi_density(Dimension d, double r) {
    require_finite(r, "chi_density");
    if (r < 0.0) return 0.0;
    const double dd = d.as_double();
    if (r == 0.0) {
        return d.value() == 1 ? std::sqrt(2.0 / std::numbers::pi) : 0.0;
    }
    const double log_density =
        (dd - 1.0) * std::log(r) - 0.5 * r * r - (0.5 * dd - 1.0) * std::numbers::ln2 - log_gamma(0.5 * dd);
    return std::exp(log_density);
}

double chi_tail_quantile(Dimension d, double tail_prob) {
    if (!(tail_prob > 0.0 && tail_prob < 1.0)) {
        throw std::domain_error("chi_tail_quantile: probability must lie in (0, 1)");
    }
    const double target = std::log(tail_prob);
    double lo = 0.0;
    double hi = std::sqrt(d.as_double()) + 1.0;
    while (chi_tail_log(d, hi).value > target) {
        lo = hi;
        hi *= 2.0;
    }
    // log tail is strictly decreasing in u, so plain bisection is enough
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi_tail_log(d, mid).value > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace sphtail
