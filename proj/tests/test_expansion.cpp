#include "ivexpand/errors.hpp"
#include "ivexpand/expansion.hpp"

#include "support.hpp"

#include <cmath>
#include <vector>

using namespace ivexpand;

namespace {

const double e1 = std::exp(-1.0);
const double e2 = std::exp(2.0);
const double e4 = std::exp(4.0);

const Expr& exp1() {
    static const Expr e = parse("exp([-1,2]*t)", 1);
    return e;
}

const Expr& prod2() {
    static const Expr e = parse("[-2,3]*x1*exp([-1,2]*x2)", 2);
    return e;
}

const ExpansionTerm& term(const ExpansionPolynomial& p, const MultiIndex& alpha) {
    for (const auto& t : p.terms) {
        if (t.alpha == alpha) {
            return t;
        }
    }
    FAIL("missing term");
    return p.terms.front();
}

} // namespace

TEST_CASE("one-dimensional expansion of the exponential example") {
    const ExpansionPolynomial p = taylor_1d(exp1(), 1.0, 3);
    REQUIRE(p.terms.size() == 3);
    CHECK(p.order == 3);
    CHECK(p.hypotheses_verified);
    CHECK_FALSE(p.remainder.has_value());
    CHECK_INTERVAL_CLOSE(p.terms[0].coeff, Interval(e1, e2), 1e-12);
    CHECK_INTERVAL_CLOSE(p.terms[1].coeff, Interval(-e1, 2 * e2), 1e-12);
    CHECK_INTERVAL_CLOSE(p.terms[2].coeff, Interval(0.5 * e1, 2 * e2), 1e-12);

    const ExpansionPolynomial q = taylor_1d(exp1(), 1.0, 3, 1.5);
    REQUIRE(q.remainder.has_value());
    CHECK(q.remainder_meta.theta_samples == default_theta_samples);
    CHECK_INTERVAL_CLOSE(*q.remainder, remainder_hull(exp1(), 1.0, 1.5, 3), 0.0);
}

TEST_CASE("a quadratic interval function is reproduced exactly") {
    const Expr sq = parse("[1,3]*t^2", 1);
    const ExpansionPolynomial p = taylor_1d(sq, 1.0, 3);
    REQUIRE(p.terms.size() == 3);
    CHECK_INTERVAL_CLOSE(p.terms[0].coeff, Interval(1, 3), 1e-14);
    CHECK_INTERVAL_CLOSE(p.terms[1].coeff, Interval(2, 6), 1e-14);
    CHECK_INTERVAL_CLOSE(p.terms[2].coeff, Interval(1, 3), 1e-14);
    const double x = 1.5;
    CHECK_INTERVAL_CLOSE(eval_polynomial(p, std::vector<double>{x}), Interval(2.25, 6.75), 1e-14);
}

TEST_CASE("linear functions have a zero remainder beyond order one") {
    const Expr lin = parse("[1,2]*t + [-1,0]", 1);
    for (unsigned n = 2; n <= 4; ++n) {
        const Interval r = remainder_hull(lin, 0.5, 2.0, n);
        CHECK(magnitude(r) <= 1e-14);
    }
    const Interval r1 = remainder_hull(lin, 0.5, 2.0, 1);
    CHECK_INTERVAL_CLOSE(r1, Interval(1.5, 3.0), 1e-14);
}

TEST_CASE("remainder vanishes at the base point") {
    CHECK(remainder_hull(exp1(), 1.0, 1.0, 4) == Interval(0, 0));
    const double v[2] = {0, 0};
    CHECK(remainder_hull_along(prod2(), {2, 2}, v, 2) == Interval(0, 0));
}

TEST_CASE("remainder hull for the exponential example") {
    const Interval r = remainder_hull(exp1(), 1.0, 1.5, 3);
    // f'''(xi) = [-exp(-xi), 8 exp(2 xi)] weighted by (x-a)^3 (1-theta)^2/2.
    // The hull spans from the theta = 0 lower endpoint to the theta = 0 upper one.
    const double w = 0.125 / 2.0;
    CHECK(r.lo() <= -w * e1 + 1e-12);
    CHECK(r.hi() >= w * 8 * e2 - 1e-12);
    CHECK(r.lo() >= -w * e1 - 1e-9);
    CHECK(r.hi() <= w * 8 * std::exp(3.0) + 1e-9);
}

TEST_CASE("multi-dimensional expansion of the product example") {
    const ExpansionPolynomial p = taylor_nd(prod2(), {2, 2}, std::nullopt, 3);
    CHECK(p.terms.size() == 6);
    CHECK_INTERVAL_CLOSE(term(p, {0, 0}).coeff, Interval(-4 * e4, 6 * e4), 1e-12);
    CHECK_INTERVAL_CLOSE(term(p, {1, 0}).coeff, Interval(-2 * e4, 3 * e4), 1e-12);
    CHECK_INTERVAL_CLOSE(term(p, {0, 1}).coeff, Interval(-8 * e4, 12 * e4), 1e-12);
    CHECK_INTERVAL_CLOSE(term(p, {1, 1}).coeff, Interval(-4 * e4, 6 * e4), 1e-12);
    CHECK_INTERVAL_CLOSE(term(p, {0, 2}).coeff, Interval(-8 * e4, 12 * e4), 1e-12);
    CHECK(magnitude(term(p, {2, 0}).coeff) == 0.0);

    CHECK_THROWS_AS(taylor_nd(prod2(), {2, 2}, std::nullopt, 4), invalid_argument);
    CHECK_THROWS_AS(taylor_nd(prod2(), {2, 2}, std::nullopt, 0), invalid_argument);
}

TEST_CASE("tensor term groups equal directional term groups") {
    // Increments with a common sign keep the Minkowski sum of the tensor terms exact.
    for (const EvalPoint& x : {EvalPoint{2.5, 2.5}, EvalPoint{2.1, 2.3}, EvalPoint{2.0, 2.4}}) {
        const ExpansionPolynomial p = taylor_nd(prod2(), {2, 2}, x, 3);
        const auto tensor = term_groups(p, x.coords());
        const auto directional = directional_term_groups(prod2(), {2, 2}, x, 3);
        REQUIRE(tensor.size() == directional.size());
        for (std::size_t k = 0; k < tensor.size(); ++k) {
            CHECK_INTERVAL_CLOSE(tensor[k], directional[k], 1e-12);
        }
        REQUIRE(p.remainder.has_value());
    }
}

TEST_CASE("expansion enclosure holds on the worked examples") {
    for (double x : {1.1, 1.25, 1.5}) {
        for (unsigned n : {1u, 2u, 3u}) {
            const EnclosureReport r = expansion_enclosure(exp1(), {1.0}, {x}, n);
            CAPTURE(x);
            CAPTURE(n);
            CHECK(r.included);
            CHECK(r.theta_samples == default_theta_samples);
        }
    }
    for (const EvalPoint& x : {EvalPoint{2.1, 2.1}, EvalPoint{2.5, 2.0}, EvalPoint{2.0, 2.4}}) {
        for (unsigned s : {1u, 2u, 3u}) {
            CHECK(expansion_enclosure(prod2(), {2, 2}, x, s).included);
        }
    }
}

TEST_CASE("remainder magnitudes decay for the exponential example") {
    const auto decay = remainder_decay(exp1(), 1.0, 1.5, 15);
    REQUIRE(decay.size() == 15);
    CHECK(decay.front().first == 1);
    CHECK(decay.back().second < 1e-3 * decay.front().second);
    for (std::size_t k = 8; k < decay.size(); ++k) {
        CHECK(decay[k].second < decay[k - 1].second);
    }
}

TEST_CASE("hypothesis failures demote the expansion") {
    // The spread 2 (t^2 + 1) changes monotonicity at 0, so an expansion
    // across the origin cannot satisfy the mu-monotonicity hypotheses.
    const ExpansionPolynomial p = taylor_1d(parse("[1,3]*(t^2 + 1)", 1), -0.5, 3, 0.5);
    CHECK_FALSE(p.hypotheses_verified);
    CHECK_FALSE(p.warnings.empty());
}

TEST_CASE("a branch switch on the segment is reported") {
    CHECK_THROWS_AS(taylor_1d(parse("[1,3]*t^2 + [0,1]*t^3", 1), -0.5, 3, 0.5), derivative_undefined);
}

TEST_CASE("non-existent derivatives raise hypothesis_violated") {
    CHECK_THROWS_AS(taylor_1d(parse("[1,2]*t", 1), 0.0, 3), hypothesis_violated);
    CHECK_THROWS_AS(taylor_1d(exp1(), 1.0, 0), invalid_argument);
}
