#pragma once

// Standard normal and chi-distribution tails, in linear and log space.
//
// The chi tail P(||Z_d|| > u) is the upper regularized incomplete gamma
// function Q(d/2, u^2/2).  All routines here are pure and reentrant.

#include <cmath>

namespace sphtail {

/// Number of coordinates of a Gaussian vector / ambient space of a sphere.
class Dimension {
public:
    explicit Dimension(int d);

    int value() const noexcept { return d_; }
    double as_double() const noexcept { return static_cast<double>(d_); }

    friend bool operator==(Dimension, Dimension) = default;

private:
    int d_;
};

/// Natural-log probability; value <= 0.
struct LogProb {
    double value;

    double prob() const noexcept { return std::exp(value); }
};

/// Standard normal distribution function.  Throws std::domain_error on
/// non-finite input.
double phi_cdf(double x);

/// Upper tail 1 - Phi(x), computed without cancellation.
double phi_sf(double x);

/// P(||Z_d|| > u).  Equals 1 for u <= 0.
double chi_tail(Dimension d, double u);

/// log P(||Z_d|| > u), accurate far beyond the underflow point of chi_tail.
LogProb chi_tail_log(Dimension d, double u);

/// E ||Z_d||^p = 2^{p/2} Gamma((d+p)/2) / Gamma(d/2), p >= 0.
double chi_moment(Dimension d, double p);

/// Density of ||Z_d|| at r (zero for r < 0).
double chi_density(Dimension d, double r);

/// The u >= 0 with chi_tail(d, u) == tail_prob, for tail_prob in (0, 1).
double chi_tail_quantile(Dimension d, double tail_prob);

namespace detail {

/// Upper regularized incomplete gamma Q(a, x) and its logarithm, a > 0,
/// x >= 0.  Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);
double log_gamma_q(double a, double x);

}  // namespace detail

}  // namespace sphtail
