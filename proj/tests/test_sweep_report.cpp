#include "sphtail/report.hpp"
#include "sphtail/sweep.hpp"

#include <doctest.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

using namespace sphtail;

namespace {

SweepSpec small_spec() {
    SweepSpec s;
    s.dimensions = {1, 3};
    s.patterns = {CoefficientPattern::single(), CoefficientPattern::equal(3)};
    s.samples = 20000;
    s.seed = 4;
    s.constants = {ConstantName::C3, ConstantName::C_STAR};
    return s;
}

std::size_t count_fields(const std::string& line) {
    std::size_t n = 1;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') quoted = !quoted;
        if (ch == ',' && !quoted) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("coefficient patterns") {
    CHECK(parse_pattern("single").label() == "SINGLE");
    CHECK(parse_pattern("equal:5").label() == "EQUAL(5)");
    CHECK(parse_pattern("geometric:0.5:4").label() == "GEOMETRIC(0.5,4)");
    CHECK(parse_pattern("explicit:1;2.5").label() == "EXPLICIT(1;2.5)");
    CHECK_THROWS_AS(parse_pattern("equal"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("equal:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("triangle:3"), std::invalid_argument);

    const CoefficientVector g = CoefficientPattern::geometric(0.5, 3).coefficients(false);
    CHECK(g[2] == 0.25);
    CHECK(CoefficientPattern::geometric(0.5, 3).coefficients(true).sum_of_squares() ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(CoefficientPattern::equal(4).coefficients(true)[0] == doctest::Approx(0.5));
}

TEST_CASE("quantile u-grid hits the requested Gaussian tail levels") {
    const UGrid grid;
    for (int d : {1, 2, 5, 10}) {
        for (double s : {0.3, 1.0, 2.0}) {
            const auto us = grid.values(Dimension(d), s);
            REQUIRE(us.size() == 7);
            for (std::size_t i = 0; i < us.size(); ++i) {
                CHECK(chi_tail(Dimension(d), us[i] / s) == doctest::Approx(grid.levels[i]).epsilon(1e-10));
                if (i) CHECK(us[i] > us[i - 1]);
            }
        }
    }
    const UGrid lin{Spacing::LINEAR, 0.0, 2.0, 5, {}};
    const auto us = lin.values(Dimension(3), 1.0);
    REQUIRE(us.size() == 5);
    CHECK(us[1] == doctest::Approx(0.5));
    CHECK(us.back() == 2.0);
    CHECK_THROWS_AS((UGrid{Spacing::LINEAR, 1.0, 0.0, 5, {}}.values(Dimension(3), 1.0)), std::invalid_argument);
}

TEST_CASE("judge") {
    const BoundResult b{bound_constant(ConstantName::C3), 1.0, 0.3, 0.3};
    const BoundResult big{bound_constant(ConstantName::C3), 1.0, 2.0, 1.0};
    auto est = [](double lo, double hi) { return McEstimate{(lo + hi) / 2, lo, hi, 100, 50, 1, 0.01}; };
    CHECK(judge(est(0.1, 0.2), b, BoundSemantics::RAW) == Verdict::HOLDS);
    CHECK(judge(est(0.2, 0.4), b, BoundSemantics::RAW) == Verdict::INCONCLUSIVE);
    CHECK(judge(est(0.31, 0.4), b, BoundSemantics::RAW) == Verdict::VIOLATED);
    CHECK(judge(est(0.99, 1.0), big, BoundSemantics::RAW) == Verdict::HOLDS);
    CHECK(judge(est(0.99, 1.0), big, BoundSemantics::CAPPED) == Verdict::HOLDS);
}

TEST_CASE("sweep cost and budget") {
    SweepSpec s = small_spec();
    CHECK(sweep_cost(s) == 20000ULL * 2 * 2 * 7);
    s.budget = sweep_cost(s) - 1;
    CHECK_THROWS_AS(run_verify(s), CapacityError);
}

TEST_CASE("small sweep holds everywhere") {
    const VerifyReport r = run_verify(small_spec());
    CHECK(r.records.size() == 2 * 2 * 7);
    CHECK(r.summary.violated == 0);
    CHECK(r.summary.holds + r.summary.inconclusive == r.records.size());
    for (const auto& rec : r.records) {
        CHECK(rec.checks.size() == 2);
        CHECK(rec.ratio_hat == doctest::Approx(rec.lhs.p_hat / rec.gaussian_tail));
        CHECK(rec.ratio_upper >= rec.ratio_hat);
        CHECK(rec.checks[0].bound.raw == doctest::Approx(4.463452649597259 * rec.gaussian_tail));
    }
}

TEST_CASE("shortest round-trip number formatting") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> ud(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = ud(gen) * std::pow(10.0, i % 40 - 20);
        const std::string s = format_double(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
    CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("verify CSV layout and determinism") {
    SweepSpec s = small_spec();
    s.mc.workers = 1;
    const std::string one = verify_csv(run_verify(s));
    s.mc.workers = 3;
    const std::string three = verify_csv(run_verify(s));
    CHECK(one == three);

    std::istringstream in(one);
    std::string line;
    std::getline(in, line);
    CHECK(line == "d,n,pattern,u,scale,constant_name,constant_value,bound_raw,bound_capped,p_hat,ci_low,ci_high,"
                  "hits,samples,seed,verdict");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(count_fields(line) == 16);
        ++rows;
    }
    CHECK(rows == 2 * 2 * 7 * 2);
}

TEST_CASE("bound table CSV leaves estimate columns empty") {
    const BoundResult b = theorem_bound({Dimension(2), CoefficientVector{1.0, 1.0}, 1.5},
                                        bound_constant(ConstantName::C3));
    const std::string csv = bound_table_csv({{2, "EXPLICIT", 2, 1.5, b}});
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(count_fields(row) == 16);
    CHECK(row.substr(row.size() - 7) == ",,,,,,,");
}

TEST_CASE("verify JSON") {
    const VerifyReport r = run_verify(small_spec());
    const auto doc = nlohmann::json::parse(verify_json(r, ReportMeta{4, false}));
    CHECK(doc["meta"]["seed"] == 4);
    CHECK(doc["meta"]["timestamp"].is_null());
    CHECK(doc["meta"]["version"] == kVersion);
    CHECK(doc["records"].size() == r.records.size());
    CHECK(doc["records"][0]["query"]["pattern"] == "SINGLE");
    CHECK(doc["records"][0]["bounds"].size() == 2);
    CHECK(doc["summary"]["violated"] == 0);
    CHECK(verify_json(r, ReportMeta{4, false}) == verify_json(r, ReportMeta{4, false}));

    const auto stamped = nlohmann::json::parse(verify_json(r, ReportMeta{4, true}));
    CHECK(stamped["meta"]["timestamp"].get<std::string>().size() == 20);
}
