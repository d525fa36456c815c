#pragma once

#include "ivexpand/expr.hpp"
#include "ivexpand/interval.hpp"
#include "ivexpand/jet.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ivexpand {

inline constexpr std::size_t default_theta_samples = 257;
inline constexpr std::size_t hypothesis_samples = 33;
inline constexpr unsigned max_tensor_order = 3;

struct ExpansionTerm {
    MultiIndex alpha;
    Interval coeff;  // (1/alpha!) d^|alpha| f(a)
};

struct RemainderMeta {
    std::size_t theta_samples = 0;
    std::vector<double> segment_from;
    std::vector<double> segment_to;
    bool sampled = true;  // hull over a theta grid; not a rigorous bound
};

// Partial sum f(a) + sum_alpha (x - a)^alpha c_alpha, optionally with a
// remainder enclosure for a specific target point.
struct ExpansionPolynomial {
    std::vector<double> base_point;
    std::vector<ExpansionTerm> terms;
    unsigned order = 0;  // number of retained derivative orders
    std::optional<Interval> remainder;
    RemainderMeta remainder_meta;
    // False when the mu-monotonicity hypotheses could not be confirmed on
    // the sampled segment; the polynomial is then a formal expansion.
    bool hypotheses_verified = true;
    std::vector<std::string> warnings;
};

// Terms k = 0..n-1 of the expansion about a; with a target, the remainder
// for that x is attached. hypothesis_violated when a derivative of order
// < n does not exist as a bracket at a.
ExpansionPolynomial taylor_1d(const Expr& e, double a, unsigned n, std::optional<double> target = std::nullopt,
                              std::size_t theta_samples = default_theta_samples);

// Hull over theta in [0,1] of (x-a)^n (1-theta)^(n-1)/(n-1)! f^(n)(a + theta (x-a)).
Interval remainder_hull(const Expr& e, double a, double x, unsigned n,
                        std::size_t theta_samples = default_theta_samples);

// Same hull for g(t) = e(a + t v) from t = 0 to t = 1.
Interval remainder_hull_along(const Expr& e, const EvalPoint& a, std::span<const double> v, unsigned n,
                              std::size_t theta_samples = default_theta_samples);

// Multi-index terms of total order < s about a (s <= 3); remainder from the
// directional reduction along a -> x when a target is given.
ExpansionPolynomial taylor_nd(const Expr& e, const EvalPoint& a, std::optional<EvalPoint> target, unsigned s,
                              std::size_t theta_samples = default_theta_samples);

Interval eval_polynomial(const ExpansionPolynomial& poly, std::span<const double> x);

// Per total order k: the sum over |alpha| = k of (x-a)^alpha c_alpha.
std::vector<Interval> term_groups(const ExpansionPolynomial& poly, std::span<const double> x);

// (1/k!) g^(k)(0) for g(t) = e(a + t (x - a)), k = 0..s-1.
std::vector<Interval> directional_term_groups(const Expr& e, const EvalPoint& a, const EvalPoint& x, unsigned s);

// (n, magnitude of remainder_hull) for n = 1..n_max.
std::vector<std::pair<unsigned, double>> remainder_decay(const Expr& e, double a, double x, unsigned n_max,
                                                         std::size_t theta_samples = default_theta_samples);

struct EnclosureReport {
    Interval lhs;  // f(x) -gH partial sum
    Interval rhs;  // remainder hull
    bool included = false;
    double margin = 0.0;  // min distance of lhs endpoints inside rhs (negative when outside)
    double tol = 0.0;
    std::size_t theta_samples = 0;
};

// Expansion-inclusion check with padding 1e-9 (1 + magnitude(rhs)).
EnclosureReport expansion_enclosure(const Expr& e, const EvalPoint& a, const EvalPoint& x, unsigned n,
                                    std::size_t theta_samples = default_theta_samples);

} // namespace ivexpand
