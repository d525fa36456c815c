#include "ivexpand/errors.hpp"
#include "ivexpand/verify.hpp"

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

using namespace ivexpand;

namespace {

const double e1 = std::exp(-1.0);
const double e2 = std::exp(2.0);

} // namespace

TEST_CASE("finite-difference oracle") {
    const auto [lo, hi] = oracle_endpoint_fd(parse("[1,4]*x1^2+[0,1]*x2", 2), 1, {1, 1});
    CHECK(lo == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(hi == doctest::Approx(8.0).epsilon(1e-8));
    const auto [l2, h2] = oracle_endpoint_fd(parse("[1,4]*x1^2+[0,1]*x2", 2), 2, {1, 1});
    CHECK(l2 == doctest::Approx(0.0));
    CHECK(h2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(oracle_endpoint_fd(parse("x1", 1), 2, {0}), invalid_argument);
}

TEST_CASE("bracket theorem on the worked examples") {
    const Report r = check_bracket_theorem({{parse("exp([-1,2]*t)", 1), {1.0}},
                                            {parse("[-2,3]*x1*exp([-1,2]*x2)", 2), {2, 2}}});
    CHECK(r.passed);
    CHECK(r.samples == 3);
    CHECK(r.skipped == 0);
    CHECK(r.measured <= 1e-6);

    const Report tie = check_bracket_theorem({{parse("[1,2]*x1 + [0,1]*x2^2", 2), {0, 0}}});
    CHECK(tie.all_skipped());
    CHECK_FALSE(tie.notes.empty());

    const Report empty = check_bracket_theorem({});
    CHECK(empty.passed);
    CHECK(empty.samples == 0);
}

TEST_CASE("mean-value inclusion") {
    const Report r = check_mvt(parse("exp([-1,2]*t)", 1), 0.0, 1.0);
    CHECK(r.passed);
    REQUIRE(r.lhs.has_value());
    REQUIRE(r.rhs.has_value());
    CHECK_INTERVAL_CLOSE(*r.lhs, Interval(e1 - 1, e2 - 1), 1e-12);
    // The grid point t = 0 is a branch tie, so its derivative comes from the numeric quotient.
    CHECK_INTERVAL_CLOSE(*r.rhs, Interval(-1, 2 * e2), 1e-7);
    CHECK(is_subset_within(*r.lhs, *r.rhs, 0.0));

    const Report sq = check_mvt(parse("[1,3]*t^2", 1), -1.0, 1.0);
    CHECK(sq.passed);
    CHECK_INTERVAL_CLOSE(*sq.lhs, Interval(0, 0), 1e-15);

    CHECK_THROWS_AS(check_mvt(parse("t", 1), 1.0, 0.0), invalid_argument);
}

TEST_CASE("expansion inclusion check") {
    const Report r = check_expansion_inclusion(parse("exp([-1,2]*t)", 1), {1.0}, {1.5}, 3);
    CHECK(r.passed);
    REQUIRE(r.margin.has_value());
    CHECK(*r.margin >= -r.tolerance);
}

TEST_CASE("algebra rules") {
    const Report diff = check_algebra_rules(
        RuleMode::sum_different, {parse("[0,1]*t", 1), parse("[0,1]*(1-t)", 1), {}, {0.5}, {}});
    CHECK(diff.passed);
    REQUIRE(diff.lhs.has_value());
    CHECK(hausdorff(*diff.lhs, Interval(0, 0)) <= 1e-6);

    const Report same = check_algebra_rules(
        RuleMode::sum_equal, {parse("[1,2]*t", 1), parse("[0,1]*t^2", 1), {}, {0.5}, {}});
    CHECK(same.passed);

    const Report chain = check_algebra_rules(
        RuleMode::chain, {parse("[1,2]*x1 + [0,1]*x2", 2), {}, {parse("t^2", 1), parse("t^3", 1)}, {1.0}, {}});
    CHECK(chain.passed);
    REQUIRE(chain.lhs.has_value());
    CHECK(hausdorff(*chain.lhs, Interval(2, 7)) <= 1e-6);
    CHECK(hausdorff(*chain.rhs, Interval(2, 7)) <= 1e-12);

    const Report product = check_algebra_rules(
        RuleMode::product, {parse("exp([-1,2]*t)", 1), parse("2 - t", 1), {}, {1.0}, {}});
    CHECK(product.passed);
    CHECK(hausdorff(*product.rhs, Interval(-2 * e1, e2)) <= 1e-12);

    // Spreads moving in the same direction do not fit the different-monotonicity rule.
    const Report mismatch = check_algebra_rules(
        RuleMode::sum_different, {parse("[1,2]*t", 1), parse("[0,1]*t^2", 1), {}, {0.5}, {}});
    CHECK(mismatch.all_skipped());

    CHECK(std::string(to_string(RuleMode::chain)) == "chain");
}

TEST_CASE("generator is deterministic by seed") {
    CaseGenerator a(123);
    CaseGenerator b(123);
    CaseGenerator c(124);
    bool any_different = false;
    for (int k = 0; k < 50; ++k) {
        const Case ca = a.next_case(2);
        const Case cb = b.next_case(2);
        const Case cc = c.next_case(2);
        REQUIRE(ca.expr == cb.expr);
        REQUIRE(ca.point == cb.point);
        any_different = any_different || !(ca.expr == cc.expr);
        CHECK(magnitude(eval_interval(ca.expr, ca.point)) <= 1e3);
        for (double x : ca.point.coords()) {
            CHECK(std::fabs(x) <= 1.0);
        }
    }
    CHECK(any_different);
    for (int k = 0; k < 50; ++k) {
        CHECK(a.expr(3, true).is_real_valued());
    }
}

TEST_CASE("generated suites") {
    const Report bracket = generated_bracket_suite();
    CHECK(bracket.passed);
    CHECK(bracket.samples >= 200);
    CHECK(bracket.measured <= 1e-6);

    const Report mvt = generated_mvt_suite();
    CHECK(mvt.passed);
    CHECK(mvt.samples == 100);

    const Report rules = generated_rule_suite();
    CHECK(rules.passed);
    CHECK(rules.samples == 50);

    const Report again = generated_rule_suite();
    CHECK(again.measured == rules.measured);
}

TEST_CASE("worked-example suite is ordered and passes") {
    const std::vector<Report> reports = example_suite();
    CHECK(std::is_sorted(reports.begin(), reports.end(),
                         [](const Report& x, const Report& y) { return x.check_id < y.check_id; }));
    for (const Report& r : reports) {
        CAPTURE(r.check_id);
        CHECK((r.passed || r.all_skipped()));
    }
}

TEST_CASE("corpus suite") {
    const std::vector<Report> empty = corpus_suite({});
    for (const Report& r : empty) {
        CHECK(r.passed);
        CHECK(r.samples == 0);
    }
    const std::vector<Report> some = corpus_suite({parse("exp([-1,2]*t)", 1), parse("[1,2]*x1*x2", 2)});
    REQUIRE_FALSE(some.empty());
    for (const Report& r : some) {
        CAPTURE(r.check_id);
        CHECK((r.passed || r.all_skipped()));
    }
}
