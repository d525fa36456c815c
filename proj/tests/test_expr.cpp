#include "ivexpand/errors.hpp"
#include "ivexpand/expr.hpp"
#include "ivexpand/verify.hpp"

#include "support.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace ivexpand;

TEST_CASE("parse builds the expected trees") {
    const Expr e = parse("[1,4]*x1^2 + [0,1]*x2", 2);
    const Expr expected(node::add(node::mul(node::interval(Interval(1, 4)), node::pow(node::var(1), 2)),
                                  node::mul(node::interval(Interval(0, 1)), node::var(2))),
                        2);
    CHECK(e == expected);

    const Expr prod2 = parse("[-2,3]*x1*exp([-1,2]*x2)", 2);
    const Expr ef_expected(
        node::mul(node::mul(node::interval(Interval(-2, 3)), node::var(1)),
                  node::unary(UnaryFn::exp, node::mul(node::interval(Interval(-1, 2)), node::var(2)))),
        2);
    CHECK(prod2 == ef_expected);

    CHECK(parse("x1", 1) == Expr(node::var(1), 1));
    CHECK(parse("t", 1) == Expr(node::var(1), 1));
}

TEST_CASE("precedence and associativity") {
    // ^ binds tighter than *, which binds tighter than + and -; left-associative.
    CHECK(parse("x1 - x1 - 2", 1) == Expr(node::sub(node::sub(node::var(1), node::var(1)), node::real(2)), 1));
    CHECK(parse("2*x1^3", 1) == Expr(node::mul(node::real(2), node::pow(node::var(1), 3)), 1));
    CHECK(parse("(x1 + 1)*2", 1) == Expr(node::mul(node::add(node::var(1), node::real(1)), node::real(2)), 1));
    CHECK(parse("-1.5e-1*x1", 1) == Expr(node::mul(node::real(-0.15), node::var(1)), 1));
    CHECK(parse("ghdiff([1,2], x1)", 1) == Expr(node::ghdiff(node::interval(Interval(1, 2)), node::var(1)), 1));
}

TEST_CASE("parse errors carry positions") {
    try {
        (void)parse("[1,2]*x1 +\n  * x2", 2);
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse("x3", 2), parse_error);
    CHECK_THROWS_AS(parse("foo(x1)", 1), parse_error);
    CHECK_THROWS_AS(parse("[1,2", 1), parse_error);
    CHECK_THROWS_AS(parse("x1^", 1), parse_error);
    CHECK_THROWS_AS(parse("", 1), parse_error);
}

TEST_CASE("reversed interval literal is normalized with a warning") {
    std::vector<std::string> warnings;
    const Expr e = parse("[3,1]*x1", 1, &warnings);
    CHECK(e == parse("[1,3]*x1", 1));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("column 1") != std::string::npos);
}

TEST_CASE("print/parse round trip") {
    for (const char* text : {"[1,4]*x1^2 + [0,1]*x2", "[-2,3]*x1*exp([-1,2]*x2)", "x1 - (x2 - x1)",
                             "(x1 + x2)^3", "ln(x1^2 + 1) * sqrt(x2^2 + 2)", "ghdiff(x1*[1,2], x2)",
                             "-0.1*x1 + 1e-20", "2*(3*x1)"}) {
        const Expr e = parse(text, 2);
        CAPTURE(text);
        CAPTURE(print(e));
        CHECK(parse(print(e), 2) == e);
    }
    CaseGenerator gen(77);
    for (int k = 0; k < 300; ++k) {
        const Expr e = gen.expr(3);
        CAPTURE(print(e));
        REQUIRE(parse(print(e), 3) == e);
    }
}

TEST_CASE("eval_interval examples") {
    const Expr prod2 = parse("[-2,3]*x1*exp([-1,2]*x2)", 2);
    const double e4 = std::exp(4.0);
    CHECK_INTERVAL_CLOSE(eval_interval(prod2, {2, 2}), Interval(-4 * e4, 6 * e4), 1e-15);
    CHECK(eval_interval(parse("exp([-1,2]*x1)", 1), {0}) == Interval(1, 1));
    CHECK(eval_interval(parse("[1,4]*x1^2+[0,1]*x2", 2), {1, 1}) == Interval(1, 5));
    CHECK_THROWS_AS(eval_interval(parse("ln(x1)", 1), {-1}), domain_error);
}

TEST_CASE("subtraction is Minkowski, ghdiff is explicit") {
    const Expr minus = parse("[1,3] - [0,1]", 1);
    CHECK(eval_interval(minus, {0}) == Interval(0, 3));
    const Expr gh = parse("ghdiff([1,3], [0,1])", 1);
    CHECK(eval_interval(gh, {0}) == Interval(1, 2));
}

TEST_CASE("positive homogeneity in a literal of a linear expression") {
    for (double s : {0.5, 2.0, 3.25}) {
        const Expr scaled(node::add(node::mul(node::interval(Interval(s, 2 * s)), node::var(1)),
                                    node::mul(node::interval(Interval(0, 1)), node::var(2))),
                          2);
        const Expr x1only = parse("[1,2]*x1", 2);
        const EvalPoint p{0.75, -0.4};
        CHECK_INTERVAL_CLOSE(eval_interval(Expr(node::mul(node::real(s), x1only.root_ptr()), 2), p),
                             scalar_mul(s, eval_interval(x1only, p)), 1e-15);
        CHECK_INTERVAL_CLOSE(eval_interval(scaled, p),
                             add(scalar_mul(s, eval_interval(x1only, p)), eval_interval(parse("[0,1]*x2", 2), p)),
                             1e-15);
    }
}

TEST_CASE("substitute composes functions") {
    const Expr f = parse("[1,2]*x1 + [0,1]*x2", 2);
    const std::vector<Expr> inner{parse("t^2", 1), parse("t^3", 1)};
    const Expr g = substitute(f, inner);
    CHECK(g.arity() == 1);
    CHECK(eval_interval(g, {2}) == eval_interval(f, {4, 8}));
}

TEST_CASE("EvalPoint and perturb") {
    CHECK(perturb({1, 2}, 1, 0.5) == EvalPoint{1.5, 2});
    CHECK(perturb({0, 0}, 2, -1) == EvalPoint{0, -1});
    const EvalPoint p{3, 4};
    CHECK(perturb(p, 2, 0) == p);
    CHECK_THROWS_AS(perturb(p, 3, 1), invalid_argument);
    CHECK_THROWS_AS(perturb(p, 0, 1), invalid_argument);
    CHECK_THROWS_AS(EvalPoint({1.0, std::nan("")}), invalid_argument);
}

TEST_CASE("real-valued detection") {
    CHECK(parse("2*t^2 - 1", 1).is_real_valued());
    CHECK(parse("[2,2]*t", 1).is_real_valued());
    CHECK_FALSE(parse("[1,2]*t", 1).is_real_valued());
}
