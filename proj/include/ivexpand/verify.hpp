#pragma once

#include "ivexpand/expr.hpp"
#include "ivexpand/interval.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ivexpand {

inline constexpr std::uint64_t default_seed = 0x5EED;

struct Witness {
    std::vector<double> point;
    Interval expected;
    Interval actual;
};

// Outcome of one verification check. passed <=> measured <= tolerance; a
// failed report carries at least one witness (worst first). A check whose
// every sample was excluded by its preconditions has samples == 0 and
// skipped > 0.
struct Report {
    std::string check_id;
    bool passed = true;
    double measured = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::vector<Witness> witnesses;
    std::size_t skipped = 0;
    std::vector<std::string> notes;  // skip reasons and other diagnostics
    std::optional<Interval> lhs;
    std::optional<Interval> rhs;
    std::optional<double> margin;

    bool all_skipped() const noexcept { return samples == 0 && skipped > 0; }
};

// Central-difference slopes of the lower and upper endpoint functions along
// axis i (1-based).
std::pair<double, double> oracle_endpoint_fd(const Expr& e, std::size_t i, const EvalPoint& p, double h = 1e-5);

struct Case {
    Expr expr;
    EvalPoint point;
};

// partial_gh against the bracket of the finite-difference oracle, for every
// axis of every case. Branch ties and branch switches within +-h are skipped.
Report check_bracket_theorem(const std::vector<Case>& corpus, double tol = 1e-6, double h = 1e-5,
                             std::string check_id = "bracket-theorem");

// f(beta) -gH f(alpha) inside (beta - alpha) times the hull of f' sampled on
// `grid` points of [alpha, beta].
Report check_mvt(const Expr& e, double alpha, double beta, std::size_t grid = 257, double tol = 1e-9,
                 std::string check_id = "mvt");

// Expansion about a to order n evaluated at x against its remainder hull.
Report check_expansion_inclusion(const Expr& e, const EvalPoint& a, const EvalPoint& x, unsigned n,
                                 double tol = 1e-9, std::string check_id = "expansion-inclusion");

enum class RuleMode { sum_equal, sum_different, product, chain };

const char* to_string(RuleMode m) noexcept;

// Inputs for check_algebra_rules.
//   sum modes: f and g single-variable, identity at `point`, monotonicity
//              verified on `box` (a small box around the point when empty);
//   product:   g real-valued, f single-variable;
//   chain:     f over n variables, `inner` n real-valued functions of the
//              point's variables.
struct RuleCase {
    Expr f;
    std::optional<Expr> g;
    std::vector<Expr> inner;
    EvalPoint point;
    std::vector<Interval> box;
};

Report check_algebra_rules(RuleMode mode, const RuleCase& c, double tol = 1e-6, std::string check_id = "");

// Seeded random expressions over {+, *, ^2, ^3, exp} of depth <= 4 with
// interval literals in [-3, 3]; exp arguments contain no exp. Points are
// drawn from [-1, 1]^n. Bit-reproducible for a given seed.
class CaseGenerator {
public:
    explicit CaseGenerator(std::uint64_t seed = default_seed);

    Expr expr(std::size_t arity, bool real_valued = false);
    EvalPoint point(std::size_t arity);
    double uniform(double lo, double hi);

    // Expression/point pair with |f| <= 1e3 and finite values; when
    // `stable`, the point is also branch-stable.
    Case next_case(std::size_t arity, bool stable = true);

private:
    NodePtr gen(int depth, std::size_t arity, bool real_valued, bool allow_exp);
    std::size_t below(std::size_t n);

    std::mt19937_64 rng_;
};

// Seeded suites.
Report generated_bracket_suite(std::uint64_t seed = default_seed, std::size_t cases = 200);
Report generated_mvt_suite(std::uint64_t seed = default_seed, std::size_t cases = 100);
Report generated_rule_suite(std::uint64_t seed = default_seed, std::size_t cases = 50);

// Checks on the worked examples (derivative ladders, expansions, Hessian,
// branch-tie case, rule identities), ordered by check_id.
std::vector<Report> example_suite();

// Bracket-theorem and (single-variable) mean-value checks on user
// expressions at seeded points, ordered by check_id.
std::vector<Report> corpus_suite(const std::vector<Expr>& exprs, std::uint64_t seed = default_seed);

void sort_reports(std::vector<Report>& reports);

} // namespace ivexpand
