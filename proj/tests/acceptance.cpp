// Acceptance run: one PASS/FAIL line per criterion; exit status 1 when any fails.

#include "ivexpand/calculus.hpp"
#include "ivexpand/dual.hpp"
#include "ivexpand/expansion.hpp"
#include "ivexpand/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

using namespace ivexpand;

namespace {

const double e1 = std::exp(-1.0);
const double e2 = std::exp(2.0);
const double em2 = std::exp(-2.0);
const double e4 = std::exp(4.0);

// Largest endpoint error relative to the expected magnitude (at least 1).
double rel_error(const Interval& actual, const Interval& expected) {
    return hausdorff(actual, expected) / std::max(1.0, magnitude(expected));
}

struct Outcome {
    bool passed = true;
    std::string detail;
};

class Tracker {
public:
    void require(bool ok, const std::string& what) {
        if (!ok && out_.passed) {
            out_.passed = false;
            out_.detail = what;
        }
    }

    void within(const Interval& actual, const Interval& expected, double tol, const std::string& what) {
        const double err = rel_error(actual, expected);
        worst_ = std::max(worst_, err);
        char buf[320];
        std::snprintf(buf, sizeof buf, "%s: got %s, expected %s (error %.3g > %.3g)", what.c_str(),
                      format(actual, 12).c_str(), format(expected, 12).c_str(), err, tol);
        require(err <= tol, buf);
    }

    Outcome finish(const std::string& summary) {
        if (out_.passed) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "; worst relative error %.3g", worst_);
            out_.detail = summary + buf;
        }
        return out_;
    }

private:
    Outcome out_;
    double worst_ = 0.0;
};

const Expr& exp1() {
    static const Expr e = parse("exp([-1,2]*t)", 1);
    return e;
}

const Expr& prod2() {
    static const Expr e = parse("[-2,3]*x1*exp([-1,2]*x2)", 2);
    return e;
}

Outcome derivative_ladder() {
    Tracker t;
    t.within(partial_gh(exp1(), 1, {1.0}).value, Interval(-e1, 2 * e2), 1e-9, "first derivative");
    const DirectionalDerivatives d = directional_derivs(exp1(), {1.0}, std::vector<double>{1.0}, 6);
    t.within(d.values.at(2), Interval(e1, 4 * e2), 1e-9, "second derivative");
    for (unsigned n = 0; n <= 6; ++n) {
        const Interval expected = bracket((n % 2 ? -1.0 : 1.0) * e1, std::pow(2.0, n) * e2);
        t.within(d.values.at(n), expected, 1e-9, "order " + std::to_string(n));
    }
    return t.finish("orders 0..6");
}

Outcome ee_expansion() {
    Tracker t;
    const ExpansionPolynomial p = taylor_1d(exp1(), 1.0, 3);
    t.require(p.terms.size() == 3, "expected 3 terms");
    if (p.terms.size() == 3) {
        t.within(p.terms[0].coeff, Interval(e1, e2), 1e-9, "constant term");
        t.within(p.terms[1].coeff, Interval(-e1, 2 * e2), 1e-9, "linear term");
        t.within(p.terms[2].coeff, Interval(0.5 * e1, 2 * e2), 1e-9, "quadratic term");
    }
    return t.finish("3 coefficients");
}

Outcome ef_expansion() {
    Tracker t;
    const ExpansionPolynomial p = taylor_nd(prod2(), {2.0, 2.0}, std::nullopt, 3);
    auto coeff = [&](const MultiIndex& alpha) {
        for (const auto& term : p.terms) {
            if (term.alpha == alpha) {
                return term.coeff;
            }
        }
        t.require(false, "missing term");
        return Interval(0.0, 0.0);
    };
    t.within(coeff({0, 0}), Interval(-4 * e4, 6 * e4), 1e-9, "constant term");
    t.within(coeff({1, 0}), Interval(-2 * e4, 3 * e4), 1e-9, "x1 term");
    t.within(coeff({0, 1}), Interval(-8 * e4, 12 * e4), 1e-9, "x2 term");
    t.within(coeff({1, 1}), Interval(-4 * e4, 6 * e4), 1e-9, "cross term");
    t.within(coeff({0, 2}), scalar_mul(0.5, Interval(-16 * e4, 24 * e4)), 1e-9, "x2^2 term");
    return t.finish("5 terms");
}

Outcome hessian_example() {
    Tracker t;
    const IntervalMatrix h = hessian(parse("[1,2]*x1^3*exp([1,2]*x2)", 2), {-1.0, -1.0});
    t.within(h(0, 0), Interval(-12 * e1, -6 * em2), 1e-9, "H11");
    t.within(h(0, 1), Interval(6 * em2, 6 * e1), 1e-9, "H12");
    t.within(h(1, 0), Interval(6 * em2, 6 * e1), 1e-9, "H21");
    t.within(h(1, 1), Interval(-2 * e1, -4 * em2), 1e-9, "H22");
    const double asym = hausdorff(h(0, 1), h(1, 0));
    t.require(asym <= 1e-12, "off-diagonal asymmetry " + std::to_string(asym));
    char buf[64];
    std::snprintf(buf, sizeof buf, "asymmetry %.3g", asym);
    return t.finish(buf);
}

Outcome tie_case() {
    Tracker t;
    const Expr tie = parse("[1,2]*x1 + [0,1]*x2^2", 2);
    const PartialResult r = partial_numeric(tie, 1, {0.0, 0.0});
    const double d = hausdorff(r.value, Interval(1.0, 2.0));
    t.require(d <= 1e-6, "numeric quotient " + format(r.value, 12) + " is " + std::to_string(d) + " from [1, 2]");
    const DualEndpoint ad = eval_dual(tie, {0.0, 0.0});
    t.require(!ad.branch_stable, "bracket-AD did not report branch instability");
    char buf[96];
    std::snprintf(buf, sizeof buf, "numeric Hausdorff %.3g; AD reports %zu tie(s)", d, ad.tie_locations.size());
    return t.finish(buf);
}

std::string report_detail(const Report& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu samples, %zu skipped, measured %.3g <= %.3g", r.samples, r.skipped,
                  r.measured, r.tolerance);
    return buf;
}

Outcome bracket_suite() {
    Tracker t;
    const Report r = generated_bracket_suite(default_seed, 200);
    t.require(r.passed && r.measured <= 1e-6, "worst defect " + std::to_string(r.measured));
    t.require(r.samples >= 200, "only " + std::to_string(r.samples) + " samples");
    return t.finish(report_detail(r));
}

Outcome mean_value() {
    Tracker t;
    const Report g = generated_mvt_suite(default_seed, 100);
    t.require(g.passed, "generated cases: " + report_detail(g));
    t.require(g.samples == 100, "only " + std::to_string(g.samples) + " cases");
    const Report ex = check_mvt(exp1(), 0.0, 1.0);
    t.require(ex.passed && ex.lhs && ex.rhs, "closed-form case failed");
    if (ex.lhs && ex.rhs) {
        t.within(*ex.lhs, Interval(e1 - 1, e2 - 1), 1e-9, "lhs");
        // The derivative at t = 0 sits on a branch tie and comes from the numeric quotient.
        t.within(*ex.rhs, Interval(-1, 2 * e2), 1e-6, "rhs");
        t.require(is_subset_within(*ex.lhs, *ex.rhs, 0.0), "lhs not inside rhs");
    }
    return t.finish(report_detail(g) + "; closed-form lhs inside rhs");
}

Outcome expansion_inclusion() {
    Tracker t;
    std::size_t passed = 0;
    for (double x : {1.1, 1.25, 1.5}) {
        for (unsigned n : {1u, 2u, 3u}) {
            const Report r = check_expansion_inclusion(exp1(), {1.0}, {x}, n);
            t.require(r.passed && r.samples == 1, "one-dimensional x=" + std::to_string(x) + " n=" + std::to_string(n));
            passed += r.passed && r.samples == 1;
        }
    }
    for (const EvalPoint& x : {EvalPoint{2.1, 2.1}, EvalPoint{2.5, 2.0}, EvalPoint{2.0, 2.4}}) {
        for (unsigned s : {1u, 2u, 3u}) {
            const Report r = check_expansion_inclusion(prod2(), {2.0, 2.0}, x, s);
            t.require(r.passed && r.samples == 1, "two-dimensional s=" + std::to_string(s));
            passed += r.passed && r.samples == 1;
        }
    }
    return t.finish(std::to_string(passed) + "/18 inclusions hold");
}

Outcome remainder_decay_check() {
    Tracker t;
    const auto seq = remainder_decay(exp1(), 1.0, 1.5, 15);
    t.require(seq.size() == 15, "expected 15 orders");
    if (seq.size() == 15) {
        const double ratio = seq.back().second / seq.front().second;
        char buf[96];
        std::snprintf(buf, sizeof buf, "ratio %.3g not below 1e-3", ratio);
        t.require(ratio < 1e-3, buf);
        for (std::size_t k = 8; k < seq.size(); ++k) {
            t.require(seq[k].second < seq[k - 1].second, "tail not decreasing at n=" + std::to_string(seq[k].first));
        }
        std::snprintf(buf, sizeof buf, "|R_1| = %.4g, |R_15| = %.4g", seq.front().second, seq.back().second);
        return t.finish(buf);
    }
    return t.finish("");
}

Outcome rule_identities() {
    Tracker t;
    const Report sum = check_algebra_rules(RuleMode::sum_different,
                                           {parse("[0,1]*t", 1), parse("[0,1]*(1-t)", 1), {}, {0.5}, {}}, 1e-6);
    t.require(sum.passed && sum.samples > 0, "sum of opposite spreads");
    if (sum.lhs) {
        t.within(*sum.lhs, Interval(0, 0), 1e-6, "sum derivative");
    }
    const Report chain = check_algebra_rules(
        RuleMode::chain, {parse("[1,2]*x1 + [0,1]*x2", 2), {}, {parse("t^2", 1), parse("t^3", 1)}, {1.0}, {}}, 1e-6);
    t.require(chain.passed && chain.samples > 0 && chain.lhs && chain.rhs, "chain case");
    if (chain.lhs && chain.rhs) {
        t.within(*chain.lhs, Interval(2, 7), 1e-6, "chain lhs");
        t.within(*chain.rhs, Interval(2, 7), 1e-6, "chain rhs");
    }
    const Report gen = generated_rule_suite(default_seed, 50);
    t.require(gen.passed && gen.samples == 50, "generated cases: " + report_detail(gen));
    return t.finish("constructed cases hold; generated " + report_detail(gen));
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double time_limit_s;  // 0 = no limit
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "derivative ladder of exp([-1,2]t)", derivative_ladder, 1.0},
        {2, "one-dimensional expansion coefficients", ee_expansion, 0.0},
        {3, "two-dimensional expansion terms", ef_expansion, 0.0},
        {4, "Hessian example", hessian_example, 0.0},
        {5, "numeric quotient at a branch tie", tie_case, 0.0},
        {6, "bracket theorem on 200 generated cases", bracket_suite, 30.0},
        {7, "mean-value inclusion", mean_value, 0.0},
        {8, "expansion inclusion (18 cases)", expansion_inclusion, 0.0},
        {9, "remainder decay", remainder_decay_check, 5.0},
        {10, "sum, chain and product rules", rule_identities, 0.0},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "runtime %.3f s exceeds %.0f s; ", secs, c.time_limit_s);
            o.passed = false;
            o.detail = buf + o.detail;
        }
        std::printf("criterion %2d %s  %-42s  %.3f s  %s\n", c.id, o.passed ? "PASS" : "FAIL", c.name, secs,
                    o.detail.c_str());
        failures += o.passed ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
