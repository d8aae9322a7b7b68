#include "figprime/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "json.hpp"

#include "doctest.h"
#include "figprime/census.hpp"
#include "figprime/figurate_set.hpp"
#include "oracles.hpp"

using namespace figprime;

namespace {

const double kE = std::exp(1.0);
const double kLog2 = std::log(2.0);

// Independent least-squares slope of log|y| against log x, mirroring how the
// library summarizes remainder decay (kept local so the test does not lean on
// the code under test).
double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    REQUIRE(xs.size() == ys.size());
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (std::abs(ys[k]) > 1e-14) {
            lx.push_back(std::log(xs[k]));
            ly.push_back(std::log(std::abs(ys[k])));
        }
    }
    REQUIRE(lx.size() >= 3);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    const double c = (double)lx.size();
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace

TEST_CASE("canonical weight family validates") {
    const HFamily fam = make_x_exp_x();
    CHECK(fam.name == "x_exp_x");
    CHECK(fam.h(1.0) == doctest::Approx(kE).epsilon(1e-15));
    const HValidation v = validate_h(fam);
    CHECK(v.valid);
    CHECK(v.violations.empty());
}

TEST_CASE("weight family rejection") {
    SUBCASE("missing evaluators") {
        HFamily fam;
        fam.name = "incomplete";
        fam.h = [](double x) { return x; };
        const HValidation v = validate_h(fam);
        CHECK_FALSE(v.valid);
        REQUIRE(v.violations.size() == 1);
        CHECK(v.violations[0] == "missing evaluator");
    }
    SUBCASE("linear weight lacks curvature at zero") {
        HFamily fam;
        fam.name = "linear";
        fam.h = [](double x) { return x; };
        fam.dh = [](double) { return 1.0; };
        fam.d2h = [](double) { return 0.0; };
        fam.d3h = [](double) { return 0.0; };
        const HValidation v = validate_h(fam);
        CHECK_FALSE(v.valid);
        REQUIRE(v.violations.size() == 1);
        CHECK(v.violations[0] == "h''(0) <= 0");
    }
    SUBCASE("claimed derivatives must match finite differences") {
        HFamily fam = make_x_exp_x();
        fam.dh = [](double x) { return std::exp(x); };  // missing (1+x) factor
        const HValidation v = validate_h(fam);
        CHECK_FALSE(v.valid);
        // Wrong at x = 1/16 and x = 1, correct by coincidence at x = 0.
        CHECK(v.violations.size() == 2);
    }
}

TEST_CASE("indicator-point sums collapse to census multiples") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();

    CHECK(h_sum_even(set, 4, fam) ==
          doctest::Approx(7 * kE).epsilon(1e-12));  // 19.027972799213316
    CHECK(h_sum_even(set, 12, fam) ==
          doctest::Approx(12 * kE).epsilon(1e-12));  // 32.61938194150854
    CHECK(log_sum_odd(set, 4) ==
          doctest::Approx(8 * kLog2).epsilon(1e-12));  // 5.545177444479562
    CHECK(log_sum_odd(set, 12) ==
          doctest::Approx(10 * kLog2).epsilon(1e-12));  // 6.931471805599453

    CHECK_THROWS_AS(h_sum_even(set, 2, fam), std::out_of_range);
    CHECK_THROWS_AS(h_sum_even(set, 151, fam), std::out_of_range);
    CHECK_THROWS_AS(log_sum_odd(set, 0), std::out_of_range);
    CHECK_THROWS_AS(log_sum_odd(set, 151), std::out_of_range);
}

TEST_CASE("evaluation point structure") {
    const FigurateSet set = build_set(300);

    const EvaluationPoint even = make_point(set, 12, Parity::even, 0.25);
    CHECK(even.n == 12);
    CHECK(even.parity == Parity::even);
    CHECK(even.epsilon == 0.25);
    REQUIRE(even.x0.size() == 23);
    REQUIRE(even.x.size() == 23);
    REQUIRE(even.delta.size() == 23);
    CHECK(even.x0[0] == 1.0);   // coordinate 1
    CHECK(even.x[0] == 1.0);
    CHECK(even.delta[0] == 0.0);
    CHECK(even.x0[11] == 0.0);  // coordinate 12, not figurate
    CHECK(even.x[11] == 0.25);
    CHECK(even.delta[11] == 0.25);
    std::size_t epsilons = 0;
    for (const double v : even.x) epsilons += v == 0.25;
    CHECK(epsilons == census_even(set, 12).a2());  // 6 non-members below 24

    const EvaluationPoint odd = make_point(set, 12, Parity::odd, 0.125);
    REQUIRE(odd.x.size() == 24);
    std::size_t odd_epsilons = 0;
    for (const double v : odd.x) odd_epsilons += v == 0.125;
    CHECK(odd_epsilons == census_odd(set, 12).b2());  // 7 non-members below 25

    CHECK_THROWS_AS(make_point(set, 12, Parity::even, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_point(set, 12, Parity::even, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_point(set, 2, Parity::even, 0.5), std::out_of_range);
    CHECK_THROWS_AS(make_point(set, 151, Parity::even, 0.5), std::out_of_range);
    CHECK_THROWS_AS(make_point(set, 0, Parity::odd, 0.5), std::out_of_range);
}

TEST_CASE("direct sums match closed forms at frozen points") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();

    // n = 12, eps = 1/2: census (l, l1, l2) = (17, 5, 12), a4 = 1, so
    // f = 2.75 * h(1/2)/0.5... spelled out: 2.75 e^{1/2} + 14.5 e.
    const EvaluationPoint p12 = make_point(set, 12, Parity::even, 0.5);
    const double f12 = f_direct(p12, fam);
    CHECK(f12 == doctest::Approx(2.75 * std::exp(0.5) + 14.5 * kE)
                     .epsilon(1e-12));  // 43.94907000708151
    CHECK(f12 ==
          doctest::Approx(f_closed_form(census_even(set, 12), fam, 0.5))
              .epsilon(1e-13));

    // n = 4 is fully saturated below the target: a4 = l1 = l-l2 = 0, so the
    // value 7e is independent of epsilon.
    for (const double eps : {0.9, 0.5, 0.01}) {
        const EvaluationPoint p4 = make_point(set, 4, Parity::even, eps);
        CHECK(f_direct(p4, fam) == doctest::Approx(7 * kE).epsilon(1e-12));
    }

    // n = 12 odd, eps = 1/4: (m, m1, m2) = (17, 7, 10), b4 = 0, so
    // g = 14 log(1.25) + 10 log 2.
    const EvaluationPoint q12 = make_point(set, 12, Parity::odd, 0.25);
    const double g12 = g_direct(q12);
    CHECK(g12 == doctest::Approx(14 * std::log1p(0.25) + 10 * kLog2)
                     .epsilon(1e-12));  // 10.055481523998392
    CHECK(g12 == doctest::Approx(g_closed_form(census_odd(set, 12), 0.25))
                     .epsilon(1e-13));

    const EvaluationPoint q4 = make_point(set, 4, Parity::odd, 0.5);
    CHECK(g_direct(q4) == doctest::Approx(8 * kLog2).epsilon(1e-12));
}

TEST_CASE("malformed evaluation points are rejected") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();
    const EvaluationPoint good_even = make_point(set, 12, Parity::even, 0.25);
    const EvaluationPoint good_odd = make_point(set, 12, Parity::odd, 0.25);

    CHECK_THROWS_AS(f_direct(good_odd, fam), std::invalid_argument);
    CHECK_THROWS_AS(g_direct(good_even), std::invalid_argument);

    EvaluationPoint tampered = good_even;
    tampered.x[0] = 0.5;
    CHECK_THROWS_AS(f_direct(tampered, fam), std::invalid_argument);

    tampered = good_even;
    tampered.x0[3] = 0.5;
    CHECK_THROWS_AS(f_direct(tampered, fam), std::invalid_argument);

    tampered = good_even;
    tampered.delta.pop_back();
    CHECK_THROWS_AS(f_direct(tampered, fam), std::invalid_argument);

    tampered = good_even;
    tampered.epsilon = 0.0;
    CHECK_THROWS_AS(f_direct(tampered, fam), std::invalid_argument);

    CHECK_THROWS_AS(f_sum({1.0, 0.5, 1.0, 0.5}, fam), std::invalid_argument);
    CHECK_THROWS_AS(f_sum({1.0, 0.5, 1.0}, fam), std::invalid_argument);
    CHECK_THROWS_AS(g_sum({1.0, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(g_sum({}), std::invalid_argument);
}

TEST_CASE("closed forms track direct sums across random points") {
    const FigurateSet set = build_set(900);
    const HFamily fam = make_x_exp_x();
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::uint64_t> pick_n(3, 400);
    std::uniform_real_distribution<double> pick_eps(0.001, 0.9);
    for (int trial = 0; trial < 30; ++trial) {
        const std::uint64_t n = pick_n(rng);
        const double eps = pick_eps(rng);
        const double f = f_direct(make_point(set, n, Parity::even, eps), fam);
        const double fc = f_closed_form(census_even(set, n), fam, eps);
        CHECK(f == doctest::Approx(fc).epsilon(1e-12));
        const double g = g_direct(make_point(set, n, Parity::odd, eps));
        const double gc = g_closed_form(census_odd(set, n), eps);
        CHECK(g == doctest::Approx(gc).epsilon(1e-12));
    }
}

TEST_CASE("Taylor coefficients") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();

    const std::vector<double> even = taylor_coeffs(census_even(set, 12), fam);
    REQUIRE(even.size() == 4);
    CHECK(even[0] == doctest::Approx(12 * kE).epsilon(1e-12));
    CHECK(even[1] == doctest::Approx(5 + 5 * kE).epsilon(1e-12));
    CHECK(even[2] == 6.0);  // a4*h'(0) + l1*h''(0)/2 = 1 + 5, exact in ties
    CHECK(even[3] == 3.5);  // a4*h''(0)/2 + l1*h'''(0)/6 = 1 + 2.5

    const std::vector<double> odd = taylor_coeffs(census_odd(set, 12));
    REQUIRE(odd.size() == 3);
    CHECK(odd[0] == doctest::Approx(10 * kLog2).epsilon(1e-12));
    CHECK(odd[1] == 14.0);  // m1 + (m - m2) = 7 + 7
    CHECK(odd[2] == -7.0);  // b4 - 14/2 = 0 - 7

    SUBCASE("saturated synthetic census kills the higher orders") {
        const EvenCensus synthetic{12, 23, 0, 12};  // l = 2n-1, l1 = 0
        const std::vector<double> c = taylor_coeffs(synthetic, fam);
        CHECK(c[2] == 0.0);
        CHECK(c[3] == 0.0);
    }
}

TEST_CASE("even aggregation residual is the universal cubic") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();
    // For a census of a real membership set l1 = l - l2, so rho collapses to
    // -e^2 - e^3/2 independent of n.
    for (const std::uint64_t n : {12ull, 100ull}) {
        for (const double eps : default_epsilon_grid()) {
            const double rho = aggregation_residual(set, n, Parity::even, fam,
                                                    eps);
            CHECK(std::abs(rho - (-eps * eps - 0.5 * eps * eps * eps)) <=
                  1e-15);
        }
    }
    CHECK_THROWS_AS(aggregation_residual(set, 12, Parity::even, fam, 0.0),
                    std::invalid_argument);

    SUBCASE("a reflection-violating synthetic census shifts rho linearly") {
        const EvenCensus synthetic{12, 17, 8, 12};  // l1 - (l - l2) = 3
        const double eps = 0.125;
        const double expected =
            3 * kE * eps - eps * eps - 0.5 * eps * eps * eps;
        CHECK(rho_residual(synthetic, fam, eps) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("odd aggregation residual") {
    const FigurateSet set = build_set(300);
    const OddCensus c12 = census_odd(set, 12);

    // Frozen value for the worked n = 12 example (b4 = 0, m1 = m - m2 = 7).
    CHECK(q_residual(c12, 0.01) ==
          doctest::Approx(0.06965463194435316).epsilon(1e-12));
    CHECK(aggregation_residual(set, 12, Parity::odd, make_x_exp_x(), 0.01) ==
          doctest::Approx(0.06965463194435316).epsilon(1e-12));

    SUBCASE("fully decomposition-saturated synthetic census vanishes") {
        const OddCensus synthetic{12, 24, 0, 24};  // b4 = 0, m1 = 0, m = m2
        for (const double eps : default_epsilon_grid()) {
            CHECK(q_residual(synthetic, eps) == 0.0);
        }
    }

    SUBCASE("Q minus its quadratic model decays cubically") {
        const std::vector<double> grid = default_epsilon_grid();
        std::vector<double> gap;
        for (const double eps : grid) {
            const double model = (double)c12.m1 * eps +
                                 0.5 * ((double)c12.b4() - (double)c12.m1) *
                                     eps * eps;
            gap.push_back(q_residual(c12, eps) - model);
        }
        const double slope = lsq_slope(grid, gap);
        CHECK(slope >= 2.5);
        CHECK(slope <= 3.5);
    }
}

TEST_CASE("hand-rolled finite differences confirm the audit anchors") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();
    const double step = 1e-5;

    SUBCASE("even literal sum at coordinate 14 of target 24") {
        // x0 over [1, 23]; coordinate 14 is not figurate, its partner 10 is.
        std::vector<double> x(23);
        for (std::size_t k = 0; k < 23; ++k) {
            x[k] = set.contains(k + 1) ? 1.0 : 0.0;
        }
        std::vector<double> hi = x, lo = x;
        hi[13] += step;
        lo[13] -= step;
        const double fd = (f_sum(hi, fam) - f_sum(lo, fam)) / (2 * step);
        // df/dx_14 = h'(0)*x_10 + h(x_10) = 1 + e.
        CHECK(fd == doctest::Approx(1.0 + kE).epsilon(1e-6));
    }

    SUBCASE("odd literal sum sees each pair twice") {
        // x0 over [1, 24]; coordinate 14 is not figurate, its partner 11 is.
        std::vector<double> x(24);
        for (std::size_t k = 0; k < 24; ++k) {
            x[k] = set.contains(k + 1) ? 1.0 : 0.0;
        }
        std::vector<double> hi = x, lo = x;
        hi[13] += step;
        lo[13] -= step;
        const double fd = (g_sum(hi) - g_sum(lo)) / (2 * step);
        // Per pair term the partial is x_11/(1 + x_14 x_11) = 1; the literal
        // sum contains the {11, 14} term twice, so the derivative is 2.
        CHECK(fd == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(std::abs(fd - 1.0) > 0.5);
    }
}

TEST_CASE("derivative audit passes at the worked example") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();

    const std::vector<DerivativeAuditEntry> even =
        derivative_audit(set, 12, Parity::even, fam);
    std::set<std::string> even_names;
    for (const DerivativeAuditEntry& e : even) {
        even_names.insert(e.formula);
        CHECK(e.samples > 0);
        CHECK(e.passed());
        CHECK(e.tolerance == (e.order == 1 ? 1e-6 : 1e-4));
    }
    CHECK(derivative_audit_passed(even));
    const std::set<std::string> expected_even{
        "f_xi",       "f_xi_xi",    "f_xi_xj",     "f_xi_xi_xj", "f_xi_xj_xj",
        "f_xi_xk_zero", "f_xi_xi_xi", "f_xn",      "f_xn_xn",    "f_xn_xn_xn"};
    CHECK(even_names == expected_even);

    const std::vector<DerivativeAuditEntry> odd =
        derivative_audit(set, 12, Parity::odd, fam);
    std::set<std::string> odd_names;
    for (const DerivativeAuditEntry& e : odd) {
        odd_names.insert(e.formula);
        CHECK(e.samples > 0);
        CHECK(e.passed());
    }
    CHECK(derivative_audit_passed(odd));
    const std::set<std::string> expected_odd{"g_xi", "g_xi_xi", "g_xi_xj",
                                             "g_xi_xk_zero"};
    CHECK(odd_names == expected_odd);

    SUBCASE("the audit is deterministic") {
        const std::vector<DerivativeAuditEntry> again =
            derivative_audit(set, 12, Parity::even, fam);
        REQUIRE(again.size() == even.size());
        for (std::size_t k = 0; k < even.size(); ++k) {
            CHECK(again[k].formula == even[k].formula);
            CHECK(again[k].max_rel_error == even[k].max_rel_error);
            CHECK(again[k].samples == even[k].samples);
        }
    }
}

TEST_CASE("remainder scan at the worked example") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();

    const ExpansionReport even = remainder_scan(set, 12, Parity::even, fam);
    CHECK(even.count_all == 17);
    CHECK(even.count_cross == 5);
    CHECK(even.count_both == 12);
    REQUIRE(even.grid.size() == 9);
    CHECK(even.exact.size() == 9);
    CHECK(even.truncated.size() == 9);
    CHECK(even.remainder.size() == 9);
    CHECK(even.ratio.size() == 9);
    CHECK(even.residual.size() == 9);
    REQUIRE(even.slope.has_value());
    CHECK(*even.slope >= 3.5);  // measured about 4.0, the expected order
    CHECK(*even.slope <= 4.5);
    // The regrouped remainder agrees with the naive difference at the coarse
    // end of the grid, where cancellation has not eaten the naive version.
    CHECK(std::abs((even.exact[0] - even.truncated[0]) - even.remainder[0]) <=
          1e-11);

    const ExpansionReport odd = remainder_scan(set, 12, Parity::odd, fam);
    CHECK(odd.count_all == 17);
    CHECK(odd.count_cross == 7);
    CHECK(odd.count_both == 10);
    REQUIRE(odd.slope.has_value());
    CHECK(*odd.slope >= 2.5);  // measured about 3.0
    CHECK(*odd.slope <= 3.5);
    CHECK(std::abs((odd.exact[0] - odd.truncated[0]) - odd.remainder[0]) <=
          1e-11);

    SUBCASE("degenerate census leaves the fit inconclusive, not wrong") {
        // n = 4 has a4 = l1 = 0: the remainder is identically zero.
        const ExpansionReport flat = remainder_scan(set, 4, Parity::even, fam);
        for (const double r : flat.remainder) CHECK(std::abs(r) <= 1e-14);
        CHECK_FALSE(flat.slope.has_value());
    }
}

TEST_CASE("remainder scan grid handling") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();

    const std::vector<double> grid = default_epsilon_grid();
    REQUIRE(grid.size() == 9);
    CHECK(grid.front() == 0.0625);
    CHECK(grid.back() == std::ldexp(1.0, -12));

    const ExpansionReport custom =
        remainder_scan(set, 12, Parity::even, fam, {0.25, 0.125, 0.0625});
    CHECK(custom.grid == std::vector<double>{0.25, 0.125, 0.0625});

    CHECK_THROWS_AS(remainder_scan(set, 12, Parity::even, fam, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(remainder_scan(set, 12, Parity::even, fam, {0.25, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(remainder_scan(set, 12, Parity::even, fam, {1.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(remainder_scan(set, 12, Parity::even, fam, {-0.25}),
                    std::invalid_argument);
}

TEST_CASE("expansion report serialization") {
    const FigurateSet set = build_set(300);
    const HFamily fam = make_x_exp_x();

    const ExpansionReport report = remainder_scan(set, 12, Parity::even, fam);
    const nlohmann::json parsed =
        nlohmann::json::parse(expansion_report_to_json(report));
    CHECK(parsed.at("n") == 12);
    CHECK(parsed.at("parity") == "even");
    CHECK(parsed.at("target") == 24);
    CHECK(parsed.at("census").at("l") == 17);
    CHECK(parsed.at("census").at("l1") == 5);
    CHECK(parsed.at("census").at("l2") == 12);
    CHECK(parsed.at("coeffs").size() == 4);
    CHECK(parsed.at("grid").size() == 9);
    CHECK(parsed.at("slope").is_number());

    const ExpansionReport flat = remainder_scan(set, 4, Parity::even, fam);
    const nlohmann::json flat_parsed =
        nlohmann::json::parse(expansion_report_to_json(flat));
    CHECK(flat_parsed.at("slope").is_null());

    const std::string csv = expansion_report_to_csv(report);
    CHECK(csv.rfind("epsilon,exact,truncated,remainder,ratio\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

    const nlohmann::json odd_parsed = nlohmann::json::parse(
        expansion_report_to_json(remainder_scan(set, 12, Parity::odd, fam)));
    CHECK(odd_parsed.at("target") == 25);
    CHECK(odd_parsed.at("census").at("m") == 17);
    CHECK(odd_parsed.at("coeffs").size() == 3);
}
