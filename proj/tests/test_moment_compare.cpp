#include "sphtail/moment_compare.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace sphtail;

namespace {

std::vector<double> random_weights(std::mt19937_64& gen, std::size_t n) {
    std::exponential_distribution<double> ed;
    std::vector<double> w(n);
    for (double& x : w) x = ed(gen);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= s;
    return w;
}

// b = P a for a random doubly stochastic P (mixture of permutations), so a majorizes b.
std::vector<double> smooth(std::mt19937_64& gen, const std::vector<double>& a) {
    std::vector<double> b(a.size(), 0.0);
    const std::vector<double> mix = random_weights(gen, 4);
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (double w : mix) {
        std::shuffle(perm.begin(), perm.end(), gen);
        for (std::size_t i = 0; i < a.size(); ++i) b[i] += w * a[perm[i]];
    }
    return b;
}

std::vector<std::vector<double>> centers(int d) {
    std::vector<std::vector<double>> ys(3, std::vector<double>(static_cast<std::size_t>(d), 0.0));
    ys[1][0] = 0.5;
    ys[2][0] = 1.5;
    return ys;
}

std::vector<double> t_grid() {
    std::vector<double> t;
    for (int k = 1; k <= 16; ++k) t.push_back(0.25 * k);
    return t;
}

}  // namespace

TEST_CASE("test functions") {
    const TestFunction p4 = TestFunction::power(4.0);
    CHECK(p4(-2.0) == 16.0);
    CHECK(p4.label() == "power4");
    CHECK(p4.exact_power() == 4);
    CHECK(p4.negated()(2.0) == -16.0);
    CHECK(p4.negated().label() == "-power4");
    CHECK_FALSE(p4.negated().exact_power().has_value());
    CHECK_FALSE(TestFunction::power(3.0).exact_power().has_value());

    CHECK(TestFunction::cosh(0.5)(2.0) == doctest::Approx(std::cosh(1.0)));
    CHECK(TestFunction::softplus_squared()(0.0) == doctest::Approx(std::log(2.0) * std::log(2.0)));

    CHECK(TestFunction::parse("power2.5").parameter() == 2.5);
    CHECK(TestFunction::parse("-power4").multiplier() == -1.0);
    CHECK(TestFunction::parse("cosh").parameter() == 1.0);
    CHECK(TestFunction::parse("softplus2").kind() == TestFunctionKind::SOFTPLUS_SQUARED);
    CHECK_THROWS_AS(TestFunction::parse("sinh1"), std::invalid_argument);

    const double x[] = {3.0, 4.0};
    CHECK(TestFunction::power(2.0).radial(x) == doctest::Approx(25.0));

    const TestFunction t = TestFunction::table({-1.0, 0.0, 2.0}, {1.0, 0.0, 4.0});
    CHECK(t(1.0) == doctest::Approx(2.0));
    CHECK(t(-0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(t(2.5), std::domain_error);
    CHECK_THROWS_AS(TestFunction::table({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("class C on the power family") {
    for (double p : {2.0, 2.25, 2.5, 2.75, 3.0, 3.5, 4.0, 5.0}) {
        const bool analytic = p == 2.0 || p >= 3.0;  // |x|^(p-2) convex
        CAPTURE(p);
        CHECK(is_class_c(TestFunction::power(p)).member() == analytic);
    }
}

TEST_CASE("class C on other functions") {
    CHECK(is_class_c(TestFunction::cosh(1.0)).member());
    CHECK(is_class_c(TestFunction::cosh(2.0)).member());
    const ClassCReport sp = is_class_c(TestFunction::softplus_squared());
    CHECK_FALSE(sp.member());
    CHECK_FALSE(sp.even);
    CHECK_FALSE(is_class_c(TestFunction::power(4.0).negated()).member());

    const std::vector<double> coarse{-1.0, 0.0, 1.0};
    CHECK(is_class_c(TestFunction::power(4.0), coarse).status == ClassCStatus::GRID_TOO_COARSE);
    const std::vector<double> lopsided{-1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
    CHECK_THROWS_AS(is_class_c(TestFunction::power(4.0), lopsided), std::invalid_argument);

    // an even table with piecewise-linear h is not twice differentiable in a convex way
    const TestFunction tent = TestFunction::table({-2, -1, 0, 1, 2}, {4, 1, 0, 1, 4});
    CHECK(is_class_c(tent).status != ClassCStatus::GRID_TOO_COARSE);
}

TEST_CASE("spherical mean of |x|^2 is |y|^2 + t") {
    for (int d : {1, 2, 3, 6}) {
        for (double y : {0.0, 0.7, 2.0}) {
            for (double t : {0.1, 1.0, 3.0}) {
                CHECK(spherical_mean(TestFunction::power(2.0), Dimension(d), y, t) ==
                      doctest::Approx(y * y + t).epsilon(1e-10));
            }
        }
    }
    // |x|^4: |y|^4 + 2|y|^2 t (1 + 2/d) + t^2
    const double y = 1.3, t = 0.8;
    for (int d : {2, 3, 5}) {
        CHECK(spherical_mean(TestFunction::power(4.0), Dimension(d), y, t) ==
              doctest::Approx(std::pow(y, 4) + 2.0 * y * y * t * (1.0 + 2.0 / d) + t * t).epsilon(1e-10));
    }
}

TEST_CASE("numerical bisubharmonicity") {
    const std::vector<double> ts = t_grid();
    for (int d : {1, 2, 3, 5}) {
        CAPTURE(d);
        const Dimension dd(d);
        CHECK(is_bisubharmonic_numeric(TestFunction::power(2.0), dd, centers(d), ts).outcome == CheckOutcome::PASS);
        CHECK(is_bisubharmonic_numeric(TestFunction::power(4.0), dd, centers(d), ts).outcome == CheckOutcome::PASS);
        CHECK(is_bisubharmonic_numeric(TestFunction::power(4.0).negated(), dd, centers(d), ts).outcome ==
              CheckOutcome::FAIL);
        // m(t) = -(|y|^2 + t) is linear, so -|x|^2 is bisubharmonic as well
        CHECK(is_bisubharmonic_numeric(TestFunction::power(2.0).negated(), dd, centers(d), ts).outcome ==
              CheckOutcome::PASS);
        CHECK(is_bisubharmonic_numeric(TestFunction::cosh(1.0), dd, centers(d), ts).outcome == CheckOutcome::PASS);
    }
}

TEST_CASE("numerical bisubharmonicity by Monte Carlo") {
    BisubOptions opts;
    opts.method = ConvexityMethod::MONTE_CARLO;
    opts.samples = 50000;
    const std::vector<double> ts{0.5, 1.0, 2.0, 3.0};
    const BisubReport good = is_bisubharmonic_numeric(TestFunction::power(4.0), Dimension(3), centers(3), ts, opts);
    CHECK(good.outcome != CheckOutcome::FAIL);
    const BisubReport bad =
        is_bisubharmonic_numeric(TestFunction::power(4.0).negated(), Dimension(3), centers(3), ts, opts);
    CHECK(bad.outcome == CheckOutcome::FAIL);
}

TEST_CASE("bisubharmonicity argument validation") {
    const std::vector<double> ts = t_grid();
    CHECK_THROWS_AS(is_bisubharmonic_numeric(TestFunction::power(4.0), Dimension(3), centers(2), ts),
                    std::invalid_argument);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(is_bisubharmonic_numeric(TestFunction::power(4.0), Dimension(3), centers(3), two),
                    std::invalid_argument);
}

TEST_CASE("majorization") {
    CHECK(schur_majorizes({{1.0, 0.0}, {0.5, 0.5}}));
    CHECK_FALSE(schur_majorizes({{0.5, 0.5}, {1.0, 0.0}}));
    const MajorizationResult r = check_majorization({{0.5, 0.5}, {1.0, 0.0}});
    REQUIRE(r.failed_index.has_value());
    CHECK(*r.failed_index == 0);
    CHECK_FALSE(check_majorization({{1.0, 1.0}, {1.0, 0.5}}).sums_equal);
    CHECK_FALSE(schur_majorizes({{1.0, 1.0}, {1.0, 0.5}}));
    CHECK_THROWS_AS(check_majorization({{1.0}, {0.5, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(check_majorization({{1.0, -1.0}, {0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("majorization is a preorder invariant under permutations") {
    std::mt19937_64 gen(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const std::vector<double> a = random_weights(gen, n);
        const std::vector<double> b = smooth(gen, a);
        const std::vector<double> c = smooth(gen, b);
        CHECK(schur_majorizes({a, a}));
        CHECK(schur_majorizes({a, b}));
        CHECK(schur_majorizes({b, c}));
        CHECK(schur_majorizes({a, c}));
        std::vector<double> pa = a, pb = b;
        std::shuffle(pa.begin(), pa.end(), gen);
        std::shuffle(pb.begin(), pb.end(), gen);
        CHECK(schur_majorizes({pa, pb}));
        // everything majorizes the uniform vector
        CHECK(schur_majorizes({a, std::vector<double>(n, 1.0 / n)}));
    }
}

TEST_CASE("Gaussian norm expectations") {
    CHECK(gaussian_norm_expectation(TestFunction::power(2.0), Dimension(3)) == doctest::Approx(3.0));
    CHECK(gaussian_norm_expectation(TestFunction::power(4.0), Dimension(3), 2.0) ==
          doctest::Approx(16.0 * 15.0));
    // E cosh(l ||Z_1||) = exp(l^2 / 2)
    CHECK(gaussian_norm_expectation(TestFunction::cosh(0.7), Dimension(1)) ==
          doctest::Approx(std::exp(0.245)).epsilon(1e-10));
    // E cosh(l s ||Z_1||) with scale s
    CHECK(gaussian_norm_expectation(TestFunction::cosh(0.5), Dimension(1), 2.0) ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-10));
    CHECK_THROWS_AS(gaussian_norm_expectation(TestFunction::power(2.0), Dimension(3), 0.0), std::invalid_argument);
}

TEST_CASE("exact Gaussian comparison for powers 2 and 4") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(1 + trial % 6);
        for (double& x : a) x = nd(gen);
        const CoefficientVector c(a);
        const Dimension d(1 + trial % 5);
        const ComparisonVerdict v2 = gaussian_comparison_check(TestFunction::power(2.0), c, d);
        CHECK(v2.lhs.exact);
        CHECK(v2.rhs.exact);
        CHECK(v2.verdict == Verdict::HOLDS);
        CHECK(std::abs(v2.margin) < 1e-12 * c.sum_of_squares());
        const ComparisonVerdict v4 = gaussian_comparison_check(TestFunction::power(4.0), c, d);
        CHECK(v4.verdict == Verdict::HOLDS);
        CHECK(v4.margin == doctest::Approx(2.0 / d.as_double() * c.sum_of_fourth_powers()).epsilon(1e-10));
    }
}

TEST_CASE("Monte Carlo Gaussian comparison for cosh") {
    CompareOptions o;
    o.samples = 200000;
    const ComparisonVerdict v =
        gaussian_comparison_check(TestFunction::cosh(1.0), CoefficientVector{1.0, 0.5}, Dimension(2), o);
    CHECK_FALSE(v.lhs.exact);
    CHECK(v.verdict == Verdict::HOLDS);
}

TEST_CASE("comparisons refuse uncertified test functions") {
    CHECK_THROWS_AS(gaussian_comparison_check(TestFunction::power(4.0).negated(), CoefficientVector{1.0, 1.0},
                                              Dimension(2)),
                    PreconditionError);
    CHECK_NOTHROW(certify_bisubharmonic(TestFunction::power(3.0), Dimension(2)));
    CHECK_THROWS_AS(certify_bisubharmonic(TestFunction::power(2.5).negated(), Dimension(2)), PreconditionError);
}

TEST_CASE("majorization comparison") {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 15; ++trial) {
        const std::vector<double> a = random_weights(gen, 2 + trial % 5);
        const std::vector<double> b = smooth(gen, a);
        const Dimension d(1 + trial % 4);
        const ComparisonVerdict v2 = bc_comparison_check(TestFunction::power(2.0), {a, b}, d);
        CHECK(v2.verdict == Verdict::HOLDS);
        CHECK(std::abs(v2.margin) < 1e-12);
        const ComparisonVerdict v4 = bc_comparison_check(TestFunction::power(4.0), {a, b}, d);
        CHECK(v4.verdict == Verdict::HOLDS);
        CHECK(v4.margin >= 0.0);
    }
    CompareOptions o;
    o.samples = 100000;
    o.prefer_exact = false;
    const ComparisonVerdict mc =
        bc_comparison_check(TestFunction::power(4.0), {{1.0, 0.0}, {0.5, 0.5}}, Dimension(2), o);
    CHECK_FALSE(mc.lhs.exact);
    CHECK(mc.verdict == Verdict::HOLDS);

    try {
        bc_comparison_check(TestFunction::power(4.0), {{0.5, 0.5}, {1.0, 0.0}}, Dimension(2));
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        REQUIRE(e.index().has_value());
        CHECK(*e.index() == 0);
    }
}

TEST_CASE("hypothesis check on xi samples") {
    const Dimension d(3);
    const std::vector<TestFunction> suite{TestFunction::power(2.0), TestFunction::power(4.0),
                                          TestFunction::power(2.5)};
    // xi = ||sum a_i U_i|| / a from a sphere sum satisfies the hypothesis
    const CoefficientVector c{1.0, 1.0, 1.0};
    std::vector<double> xi = sample_sum_norms(c, d, 100000, 3);
    for (double& x : xi) x /= scale(c, d);
    const auto ok = lemma2_hypothesis_check(xi, d, suite);
    REQUIRE(ok.size() == 3);
    CHECK(ok[0].status == HypothesisStatus::CONSISTENT);
    CHECK(ok[1].status == HypothesisStatus::CONSISTENT);
    CHECK(ok[2].status == HypothesisStatus::NOT_CLASS_C);
    CHECK_FALSE(ok[2].comparison.has_value());

    // inflated samples violate it
    for (double& x : xi) x *= 1.5;
    const auto bad = lemma2_hypothesis_check(xi, d, suite);
    CHECK(bad[0].status == HypothesisStatus::VIOLATED);
    CHECK(bad[1].status == HypothesisStatus::VIOLATED);

    CHECK_THROWS_AS(lemma2_hypothesis_check(std::vector<double>{}, d, suite), std::invalid_argument);
    CHECK_THROWS_AS(lemma2_hypothesis_check(std::vector<double>{-1.0}, d, suite), std::invalid_argument);
}

TEST_CASE("p-th moment comparison") {
    const CoefficientVector c{1.0, 2.0, 0.5};
    const ComparisonVerdict exact = kwapien_check(c, Dimension(3), 4.0);
    CHECK(exact.lhs.exact);
    CHECK(exact.rhs.value == doctest::Approx(std::pow(c.sum_of_squares(), 2.0) * 15.0));
    CHECK(exact.verdict == Verdict::HOLDS);

    CompareOptions o;
    o.samples = 100000;
    const ComparisonVerdict mc = kwapien_check(c, Dimension(2), 3.0, o);
    CHECK_FALSE(mc.lhs.exact);
    CHECK(mc.rhs.exact);
    CHECK(mc.verdict == Verdict::HOLDS);

    CHECK_THROWS_AS(kwapien_check(c, Dimension(2), 2.5), PreconditionError);
    CHECK_NOTHROW(kwapien_check(c, Dimension(2), 2.0, {}, KwapienOptions{true}));
}
