#include "sphtail/gaussian_chi.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

using namespace sphtail;

namespace {

// P(||Z_d|| > u) for even d as a finite Poisson sum.
double poisson_tail(int d, double u) {
    const double x = 0.5 * u * u;
    double term = 1.0, sum = 0.0;
    for (int j = 0; j < d / 2; ++j) {
        if (j > 0) term *= x / j;
        sum += term;
    }
    return std::exp(-x) * sum;
}

double two_sided(double u) { return std::erfc(u / std::numbers::sqrt2); }

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

TEST_CASE("dimension validation") {
    CHECK_THROWS_AS(Dimension(0), std::invalid_argument);
    CHECK_THROWS_AS(Dimension(-3), std::invalid_argument);
    CHECK(Dimension(7).value() == 7);
    CHECK(Dimension(7).as_double() == 7.0);
}

TEST_CASE("phi_cdf and phi_sf") {
    CHECK(phi_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(phi_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
    CHECK(phi_sf(-1.0) == doctest::Approx(phi_cdf(1.0)).epsilon(1e-15));
    CHECK(phi_sf(38.0) > 0.0);
    CHECK(phi_cdf(1.3) + phi_cdf(-1.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(phi_cdf(std::sqrt(2.0)) == doctest::Approx(0.9213503964748575).epsilon(1e-14));
    CHECK_THROWS_AS(phi_cdf(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(phi_cdf(-std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("chi tail in d = 2 is exp(-u^2/2)") {
    CHECK(std::abs(chi_tail(Dimension(2), 2.0) - std::exp(-2.0)) < 1e-15);
    CHECK(std::abs(chi_tail(Dimension(2), std::sqrt(2.0)) - std::exp(-1.0)) < 1e-15);
}

TEST_CASE("chi tail in d = 1 and d = 3 matches erfc forms") {
    for (int i = 0; i <= 200; ++i) {
        const double u = 0.04 * i;
        CHECK(std::abs(chi_tail(Dimension(1), u) - two_sided(u)) < 1e-13);
        const double t3 = two_sided(u) + 2.0 * u * std_normal_pdf(u);
        CHECK(std::abs(chi_tail(Dimension(3), u) - t3) < 1e-13);
    }
}

TEST_CASE("even dimensions match the Poisson sum") {
    for (int d : {2, 4, 6, 8, 10, 20, 40}) {
        for (int i = 0; i <= 120; ++i) {
            const double u = 0.1 * i;
            CHECK(std::abs(chi_tail(Dimension(d), u) - poisson_tail(d, u)) < 1e-13);
        }
    }
}

TEST_CASE("nonpositive thresholds give probability one") {
    for (int d : {1, 2, 9}) {
        CHECK(chi_tail(Dimension(d), 0.0) == 1.0);
        CHECK(chi_tail(Dimension(d), -4.0) == 1.0);
        CHECK(chi_tail_log(Dimension(d), -1.0).value == 0.0);
    }
}

TEST_CASE("tail is nonincreasing in u and nondecreasing in d") {
    for (int d = 1; d <= 30; ++d) {
        double prev = 1.0;
        for (int i = 1; i <= 150; ++i) {
            const double u = 0.1 * i;
            const double t = chi_tail(Dimension(d), u);
            CHECK(t <= prev);
            CHECK(t >= 0.0);
            CHECK(chi_tail(Dimension(d + 1), u) >= t);
            prev = t;
        }
    }
}

TEST_CASE("log tail brackets the Mills ratio at u = 10") {
    const double u = 10.0;
    const double upper = std::log(2.0 * std_normal_pdf(u) / u);
    const double lower = std::log(2.0 * std_normal_pdf(u) / u * (1.0 - 1.0 / (u * u)));
    const double v = chi_tail_log(Dimension(1), u).value;
    CHECK(v < upper);
    CHECK(v > lower);
    CHECK(v == doctest::Approx(-52.53813796995253).epsilon(1e-13));
}

TEST_CASE("log tail stays finite far beyond double underflow") {
    for (int d : {1, 2, 3, 10, 100}) {
        const LogProb lp = chi_tail_log(Dimension(d), 60.0);
        CHECK(std::isfinite(lp.value));
        CHECK(lp.value < -1500.0);
        CHECK(chi_tail(Dimension(d), 60.0) == 0.0);
    }
    // d = 2: log tail is exactly -u^2/2
    CHECK(chi_tail_log(Dimension(2), 60.0).value == doctest::Approx(-1800.0).epsilon(1e-14));
}

TEST_CASE("log tail agrees with the direct tail where both are representable") {
    for (int d : {1, 3, 5, 50, 500}) {
        for (double u : {0.5, 1.0, 3.0, 8.0, 20.0, 30.0}) {
            const double t = chi_tail(Dimension(d), u);
            if (t > 1e-300) {
                CHECK(chi_tail_log(Dimension(d), u).prob() == doctest::Approx(t).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("chi moments") {
    for (int d = 1; d <= 12; ++d) {
        const Dimension dd(d);
        CHECK(chi_moment(dd, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(chi_moment(dd, 2.0) == doctest::Approx(d).epsilon(1e-13));
        CHECK(chi_moment(dd, 4.0) == doctest::Approx(d * (d + 2.0)).epsilon(1e-13));
    }
    CHECK(chi_moment(Dimension(1), 1.0) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS(chi_moment(Dimension(2), -0.5));
}

TEST_CASE("chi moments agree with quadrature of the density") {
    for (int d = 1; d <= 10; ++d) {
        for (double p = 1.0; p <= 6.0; p += 1.0) {
            // composite Simpson on [0, 40]
            const int m = 40000;
            const double h = 40.0 / m;
            double s = 0.0;
            for (int i = 0; i <= m; ++i) {
                const double r = h * i;
                const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                s += w * std::pow(r, p) * chi_density(Dimension(d), r);
            }
            s *= h / 3.0;
            CHECK(chi_moment(Dimension(d), p) == doctest::Approx(s).epsilon(1e-8));
        }
    }
}

TEST_CASE("density is minus the derivative of the tail") {
    for (int d : {1, 2, 3, 7}) {
        for (double r : {0.3, 1.0, 2.5, 4.0}) {
            const double h = 1e-5;
            const double fd = (chi_tail(Dimension(d), r - h) - chi_tail(Dimension(d), r + h)) / (2.0 * h);
            CHECK(chi_density(Dimension(d), r) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
    CHECK(chi_density(Dimension(3), -1.0) == 0.0);
}

TEST_CASE("tail quantile inverts the tail") {
    for (int d : {1, 2, 3, 5, 10, 100}) {
        for (double p : {0.9, 0.5, 0.1, 1e-3, 1e-10, 1e-200}) {
            const double u = chi_tail_quantile(Dimension(d), p);
            CHECK(chi_tail_log(Dimension(d), u).value == doctest::Approx(std::log(p)).epsilon(1e-10));
        }
    }
    CHECK_THROWS(chi_tail_quantile(Dimension(2), 0.0));
    CHECK_THROWS(chi_tail_quantile(Dimension(2), 1.5));
}

TEST_CASE("regularized incomplete gamma spot values") {
    // Q(1, x) = exp(-x)
    for (double x : {0.1, 1.0, 5.0, 50.0}) {
        CHECK(detail::gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-14));
        CHECK(detail::log_gamma_q(1.0, x) == doctest::Approx(-x).epsilon(1e-14));
    }
    // Q(1/2, x) = erfc(sqrt x)
    for (double x : {0.01, 0.7, 3.0, 30.0}) {
        CHECK(detail::gamma_q(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-13));
    }
}
