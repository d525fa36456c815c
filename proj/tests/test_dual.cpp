#include "ivexpand/dual.hpp"
#include "ivexpand/errors.hpp"
#include "ivexpand/jet.hpp"
#include "ivexpand/verify.hpp"

#include "support.hpp"

#include <cmath>
#include <vector>

using namespace ivexpand;

namespace {

const double e1 = std::exp(-1.0);
const double e2 = std::exp(2.0);

} // namespace

TEST_CASE("jet layouts enumerate graded monomials") {
    const auto layout = JetLayout::get(2, 2);
    CHECK(layout->size() == 6);
    CHECK(layout->monomial(0) == MultiIndex{0, 0});
    CHECK(layout->total_degree(5) == 2);
    CHECK(layout->index_of(MultiIndex{1, 1}) < layout->size());
    CHECK(JetLayout::get(2, 2) == layout);
    CHECK(JetLayout::get(3, 3)->size() == 20);
}

TEST_CASE("jet arithmetic reproduces Taylor coefficients") {
    const auto layout = JetLayout::get(1, 6);
    const Jet x = Jet::variable(layout, 0, 0.3);
    const Jet y = exp(x * 2.0) * pow(x, 3) + log(x + Jet::constant(layout, 1.0)) - sqrt(x);
    // Closed-form derivatives of exp(2x) x^3 + ln(1+x) - sqrt(x) at 0.3, by
    // central differences of the function itself for the first two orders.
    auto f = [](double t) { return std::exp(2 * t) * t * t * t + std::log(1 + t) - std::sqrt(t); };
    const double h = 1e-4;
    CHECK(y.value() == doctest::Approx(f(0.3)).epsilon(1e-14));
    CHECK(y.derivative({1}) == doctest::Approx((f(0.3 + h) - f(0.3 - h)) / (2 * h)).epsilon(1e-7));
    CHECK(y.derivative({2}) == doctest::Approx((f(0.3 + h) - 2 * f(0.3) + f(0.3 - h)) / (h * h)).epsilon(1e-5));
    // exp alone: every derivative equals the value scaled by 2^k.
    const Jet z = exp(x * 2.0);
    for (unsigned k = 0; k <= 6; ++k) {
        CHECK(z.derivative({static_cast<std::uint8_t>(k)}) ==
              doctest::Approx(std::pow(2.0, k) * std::exp(0.6)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(sqrt(Jet::variable(layout, 0, 0.0)), domain_error);
    CHECK_THROWS_AS(log(Jet::variable(layout, 0, -1.0)), domain_error);
}

TEST_CASE("eval_dual on the worked examples") {
    const DualEndpoint exp1 = eval_dual(parse("exp([-1,2]*t)", 1), {1.0});
    CHECK(exp1.branch_stable);
    CHECK(exp1.lo_grad[0] == doctest::Approx(-e1).epsilon(1e-14));
    CHECK(exp1.hi_grad[0] == doctest::Approx(2 * e2).epsilon(1e-14));

    const DualEndpoint tie = eval_dual(parse("[1,2]*x1 + [0,1]*x2^2", 2), {0, 0});
    CHECK_FALSE(tie.branch_stable);
    REQUIRE_FALSE(tie.tie_locations.empty());
    CHECK(tie.tie_locations.front().node == "[1,2]*x1");

    const DualEndpoint c = eval_dual(parse("[1,2]", 3), {0.3, -1, 7});
    CHECK(c.branch_stable);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(c.lo_grad[i] == 0.0);
        CHECK(c.hi_grad[i] == 0.0);
    }
}

TEST_CASE("real products are not ties") {
    const DualEndpoint d = eval_dual(parse("x1*x2", 2), {0, 0});
    CHECK(d.branch_stable);
    CHECK(d.lo_grad == std::vector<double>{0, 0});
    const DualEndpoint sq = eval_dual(parse("[1,3]*x1^2", 1), {0});
    CHECK(sq.branch_stable);
    CHECK(sq.lo_grad[0] == 0.0);
}

TEST_CASE("dual values equal interval evaluation exactly") {
    CaseGenerator gen(5);
    for (int k = 0; k < 300; ++k) {
        const Case c = gen.next_case(1 + k % 3, false);
        const DualEndpoint d = eval_dual(c.expr, c.point);
        const Interval v = eval_interval(c.expr, c.point);
        CAPTURE(print(c.expr));
        REQUIRE(d.lo_val == v.lo());
        REQUIRE(d.hi_val == v.hi());
    }
}

TEST_CASE("stable dual gradients match central differences") {
    CaseGenerator gen(6);
    int compared = 0;
    for (int k = 0; k < 150; ++k) {
        const Case c = gen.next_case(1 + k % 3);
        const DualEndpoint d = eval_dual(c.expr, c.point);
        REQUIRE(d.branch_stable);
        for (std::size_t i = 1; i <= c.expr.arity(); ++i) {
            const auto [fl, fh] = oracle_endpoint_fd(c.expr, i, c.point, 1e-5);
            const EndpointJets plus = eval_jets_at(c.expr, perturb(c.point, i, 1e-5), 1);
            const EndpointJets minus = eval_jets_at(c.expr, perturb(c.point, i, -1e-5), 1);
            const EndpointJets here = eval_jets_at(c.expr, c.point, 1);
            if (plus.signature != here.signature || minus.signature != here.signature) {
                continue;  // the stencil straddles a branch switch
            }
            CAPTURE(print(c.expr));
            CHECK(std::fabs(d.lo_grad[i - 1] - fl) <= 1e-6 * (1 + std::fabs(fl)));
            CHECK(std::fabs(d.hi_grad[i - 1] - fh) <= 1e-6 * (1 + std::fabs(fh)));
            ++compared;
        }
    }
    CHECK(compared >= 100);
}

TEST_CASE("branch_stability scans") {
    const Interval ee_box[1] = {Interval(0.5, 1.5)};
    CHECK(branch_stability(parse("exp([-1,2]*t)", 1), ee_box, 11).stable);
    const Interval sym_box[1] = {Interval(-1, 1)};
    const StabilityScan sq = branch_stability(parse("[-1,2]*x1", 1), sym_box, 11);
    CHECK_FALSE(sq.stable);
    REQUIRE(sq.unstable_points.size() == 1);
    CHECK(sq.unstable_points[0][0] == doctest::Approx(0.0));
    const Interval box2[2] = {Interval(-3, 3), Interval(0, 1)};
    CHECK(branch_stability(parse("[1,2]", 2), box2, 5).stable);

    const StabilityScan dom = branch_stability(parse("ln(x1)", 1), sym_box, 5);
    CHECK(dom.domain_failures.size() == 3);
    CHECK_THROWS_AS(branch_stability(parse("x1", 1), sym_box, 1), invalid_argument);
}

TEST_CASE("grid_points orders the first axis slowest") {
    const Interval box[2] = {Interval(0, 1), Interval(10, 20)};
    const auto pts = grid_points(box, 3);
    REQUIRE(pts.size() == 9);
    CHECK(pts[0] == EvalPoint{0, 10});
    CHECK(pts[1] == EvalPoint{0, 15});
    CHECK(pts[3] == EvalPoint{0.5, 10});
    CHECK(pts[8] == EvalPoint{1, 20});
}
