#include "ivexpand/expansion.hpp"

#include "ivexpand/calculus.hpp"
#include "ivexpand/dual.hpp"
#include "ivexpand/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ivexpand {

namespace {

double factorial(unsigned n) {
    double r = 1.0;
    for (unsigned k = 2; k <= n; ++k) {
        r *= k;
    }
    return r;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt(std::span<const double> x) {
    std::string s = "(";
    for (std::size_t k = 0; k < x.size(); ++k) {
        s += (k ? "," : "") + fmt(x[k]);
    }
    return s + ")";
}

std::vector<double> along(const EvalPoint& a, std::span<const double> dir, double t) {
    std::vector<double> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        c[i] = a[i] + t * dir[i];
    }
    return c;
}

bool monotone(const std::vector<double>& s) {
    double scale = 0.0;
    for (double v : s) {
        scale = std::max(scale, std::fabs(v));
    }
    const double tol = 1e-9 * (1.0 + scale);
    bool up = true;
    bool down = true;
    for (std::size_t m = 1; m < s.size(); ++m) {
        up = up && s[m] - s[m - 1] >= -tol;
        down = down && s[m] - s[m - 1] <= tol;
    }
    return up || down;
}

// Lowest jet degree at which the endpoint expansions at `a` along `v` hit a
// branch tie, or -1.
int first_unstable_order(const Expr& e, const EvalPoint& a, std::span<const double> v, unsigned max_degree) {
    for (unsigned d = 0; d <= max_degree; ++d) {
        if (!eval_jets_along(e, a, v, d).branch_stable) {
            return static_cast<int>(d);
        }
    }
    return -1;
}

int first_unstable_order_at(const Expr& e, const EvalPoint& a, unsigned max_degree) {
    for (unsigned d = 0; d <= max_degree; ++d) {
        if (!eval_jets_at(e, a, d).branch_stable) {
            return static_cast<int>(d);
        }
    }
    return -1;
}

// Hull over a theta grid of prefactor (1-theta)^(n-1)/(n-1)! times the n-th
// derivative along `deriv_dir` at a + theta * move_dir. Every sample must sit
// on the branch of the first sample.
Interval theta_hull(const Expr& e, const EvalPoint& a, std::span<const double> move_dir,
                    std::span<const double> deriv_dir, double prefactor, unsigned n, std::size_t samples) {
    if (n == 0) {
        throw invalid_argument("remainder order must be at least 1");
    }
    if (n > max_series_order) {
        throw invalid_argument("remainder order " + std::to_string(n) + " exceeds the supported maximum " +
                               std::to_string(max_series_order));
    }
    if (samples < 2) {
        throw invalid_argument("theta grid needs at least 2 samples");
    }
    const double nfact = factorial(n);
    const double denom = factorial(n - 1);
    std::vector<Interval> family;
    family.reserve(samples);
    std::vector<std::uint8_t> reference;
    bool have_reference = false;
    std::vector<std::string> switches;
    for (std::size_t m = 0; m < samples; ++m) {
        const double theta = static_cast<double>(m) / static_cast<double>(samples - 1);
        EndpointJets jets = eval_jets_along(e, EvalPoint(along(a, move_dir, theta)), deriv_dir, n);
        if (!jets.branch_stable) {
            const double inward = theta < 0.5 ? 1e-9 : -1e-9;
            jets = eval_jets_along(e, EvalPoint(along(a, move_dir, theta + inward)), deriv_dir, n);
        }
        if (!jets.branch_stable || (have_reference && jets.signature != reference)) {
            switches.push_back("theta=" + fmt(theta) + " at " + fmt(along(a, move_dir, theta)));
            continue;
        }
        if (!have_reference) {
            reference = jets.signature;
            have_reference = true;
        }
        const double w = prefactor * std::pow(1.0 - theta, static_cast<double>(n - 1)) / denom;
        family.push_back(scalar_mul(w, bracket(nfact * jets.lo.coeff(n), nfact * jets.hi.coeff(n))));
    }
    if (!switches.empty()) {
        std::string msg = "branch switch on the expansion segment: ";
        for (std::size_t k = 0; k < switches.size() && k < 5; ++k) {
            msg += (k ? "; " : "") + switches[k];
        }
        if (switches.size() > 5) {
            msg += "; ... (" + std::to_string(switches.size()) + " samples)";
        }
        throw derivative_undefined(msg);
    }
    return hull(family);
}

// Spreads of the derivative ladder and of the expansion term functions on
// sampled points of the segment t in [0, 1] along v (term functions use
// (1 - t)^(i-1)/(i-1)! as weights).
void check_segment_hypotheses(const Expr& e, const EvalPoint& a, std::span<const double> v, unsigned n,
                              ExpansionPolynomial& poly) {
    std::vector<std::vector<double>> deriv_spread(n + 1);
    std::vector<std::vector<double>> term_spread(n + 1);
    for (std::size_t m = 0; m < hypothesis_samples; ++m) {
        const double t = static_cast<double>(m) / static_cast<double>(hypothesis_samples - 1);
        const EndpointJets jets = eval_jets_along(e, EvalPoint(along(a, v, t)), v, n);
        if (!jets.branch_stable) {
            poly.hypotheses_verified = false;
            poly.warnings.push_back("branch tie on the segment at t=" + fmt(t) +
                                    "; derivative ladder not confirmed there");
            continue;
        }
        for (unsigned k = 0; k <= n; ++k) {
            const double f = factorial(k);
            const double s = f * std::fabs(jets.hi.coeff(k) - jets.lo.coeff(k));
            deriv_spread[k].push_back(s);
            term_spread[k].push_back(std::pow(1.0 - t, static_cast<double>(k)) / f * s);
        }
    }
    for (unsigned k = 1; k <= n; ++k) {
        if (!monotone(deriv_spread[k])) {
            poly.hypotheses_verified = false;
            poly.warnings.push_back("derivative of order " + std::to_string(k) +
                                    " is not mu-monotonic on the segment (sampled spreads)");
        }
    }
    for (unsigned k = 0; k < n; ++k) {
        if (!monotone(term_spread[k])) {
            poly.hypotheses_verified = false;
            poly.warnings.push_back("expansion term " + std::to_string(k + 1) +
                                    " is not mu-monotonic on the segment (sampled spreads)");
        }
    }
}

// Spreads of every partial of order <= n along each axis near a.
void check_local_hypotheses(const Expr& e, const EvalPoint& a, unsigned n, ExpansionPolynomial& poly) {
    const std::size_t dim = a.size();
    for (std::size_t axis = 1; axis <= dim; ++axis) {
        const double delta = 1e-3 * (1.0 + std::fabs(a[axis - 1]));
        std::vector<std::vector<double>> spreads;
        const JetLayout* layout = nullptr;
        bool tie = false;
        for (std::size_t m = 0; m < hypothesis_samples; ++m) {
            const double tau = -delta + 2.0 * delta * static_cast<double>(m) / (hypothesis_samples - 1);
            const EndpointJets jets = eval_jets_at(e, perturb(a, axis, tau), n);
            if (!jets.branch_stable) {
                tie = true;
                continue;
            }
            layout = &jets.lo.layout();
            spreads.resize(layout->size());
            for (std::size_t k = 0; k < layout->size(); ++k) {
                const MultiIndex& alpha = layout->monomial(k);
                spreads[k].push_back(std::fabs(jets.hi.derivative(alpha) - jets.lo.derivative(alpha)));
            }
        }
        if (tie) {
            poly.hypotheses_verified = false;
            poly.warnings.push_back("branch tie near the base point along x" + std::to_string(axis));
        }
        if (layout == nullptr) {
            continue;
        }
        for (std::size_t k = 0; k < spreads.size(); ++k) {
            if (!monotone(spreads[k])) {
                poly.hypotheses_verified = false;
                std::string alpha;
                for (auto c : layout->monomial(k)) {
                    alpha += (alpha.empty() ? "" : ",") + std::to_string(c);
                }
                poly.warnings.push_back("partial of multi-index (" + alpha + ") is not mu-monotonic along x" +
                                        std::to_string(axis) + " near the base point");
            }
        }
    }
}

} // namespace

Interval remainder_hull(const Expr& e, double a, double x, unsigned n, std::size_t theta_samples) {
    if (e.arity() != 1) {
        throw invalid_argument("remainder_hull needs a single-variable function");
    }
    if (n == 0) {
        throw invalid_argument("remainder order must be at least 1");
    }
    if (x == a) {
        return Interval(0.0, 0.0);
    }
    const double h = x - a;
    const double move[1] = {h};
    const double unit[1] = {1.0};
    return theta_hull(e, EvalPoint{a}, move, unit, std::pow(h, static_cast<double>(n)), n, theta_samples);
}

Interval remainder_hull_along(const Expr& e, const EvalPoint& a, std::span<const double> v, unsigned n,
                              std::size_t theta_samples) {
    if (v.size() != e.arity() || a.size() != e.arity()) {
        throw invalid_argument("remainder direction must match the expression arity");
    }
    if (n == 0) {
        throw invalid_argument("remainder order must be at least 1");
    }
    if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; })) {
        return Interval(0.0, 0.0);
    }
    return theta_hull(e, a, v, v, 1.0, n, theta_samples);
}

ExpansionPolynomial taylor_1d(const Expr& e, double a, unsigned n, std::optional<double> target,
                              std::size_t theta_samples) {
    if (e.arity() != 1) {
        throw invalid_argument("taylor_1d needs a single-variable function, got arity " + std::to_string(e.arity()));
    }
    if (n == 0 || n > max_series_order) {
        throw invalid_argument("expansion order must be in 1.." + std::to_string(max_series_order));
    }
    const EvalPoint base{a};
    const double unit[1] = {1.0};
    const EndpointJets jets = eval_jets_along(e, base, unit, n - 1);
    if (!jets.branch_stable) {
        const int k = first_unstable_order(e, base, unit, n - 1);
        throw hypothesis_violated("derivative of order " + std::to_string(k) + " of " + print(e) +
                                  " does not exist as an endpoint bracket at a=" + fmt(a));
    }

    ExpansionPolynomial poly;
    poly.base_point = {a};
    poly.order = n;
    for (unsigned k = 0; k < n; ++k) {
        poly.terms.push_back({MultiIndex{static_cast<std::uint8_t>(k)}, bracket(jets.lo.coeff(k), jets.hi.coeff(k))});
    }

    if (target) {
        const double h = *target - a;
        if (h != 0.0) {
            const double dir[1] = {h};
            check_segment_hypotheses(e, base, dir, n, poly);
        }
        poly.remainder = remainder_hull(e, a, *target, n, theta_samples);
        poly.remainder_meta = {theta_samples, {a}, {*target}, true};
    } else {
        check_local_hypotheses(e, base, n, poly);
    }
    return poly;
}

ExpansionPolynomial taylor_nd(const Expr& e, const EvalPoint& a, std::optional<EvalPoint> target, unsigned s,
                              std::size_t theta_samples) {
    if (a.size() != e.arity()) {
        throw invalid_argument("base point has " + std::to_string(a.size()) + " coordinates, arity is " +
                               std::to_string(e.arity()));
    }
    if (s == 0 || s > max_tensor_order) {
        throw invalid_argument("tensor expansion order must be in 1.." + std::to_string(max_tensor_order));
    }
    if (target && target->size() != a.size()) {
        throw invalid_argument("target point dimension does not match the base point");
    }
    const EndpointJets jets = eval_jets_at(e, a, s - 1);
    if (!jets.branch_stable) {
        const int k = first_unstable_order_at(e, a, s - 1);
        throw hypothesis_violated("partial derivatives of order " + std::to_string(k) + " of " + print(e) +
                                  " do not exist as endpoint brackets at " + fmt(a.coords()));
    }
    ExpansionPolynomial poly;
    poly.base_point.assign(a.coords().begin(), a.coords().end());
    poly.order = s;
    const JetLayout& layout = jets.lo.layout();
    for (std::size_t k = 0; k < layout.size(); ++k) {
        poly.terms.push_back({layout.monomial(k), bracket(jets.lo.coeff(k), jets.hi.coeff(k))});
    }
    if (target) {
        std::vector<double> v(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            v[i] = (*target)[i] - a[i];
        }
        if (std::any_of(v.begin(), v.end(), [](double c) { return c != 0.0; })) {
            check_segment_hypotheses(e, a, v, s, poly);
        }
        poly.remainder = remainder_hull_along(e, a, v, s, theta_samples);
        poly.remainder_meta = {theta_samples, poly.base_point,
                               std::vector<double>(target->coords().begin(), target->coords().end()), true};
    } else {
        check_local_hypotheses(e, a, s, poly);
    }
    return poly;
}

Interval eval_polynomial(const ExpansionPolynomial& poly, std::span<const double> x) {
    if (x.size() != poly.base_point.size()) {
        throw invalid_argument("polynomial has " + std::to_string(poly.base_point.size()) +
                               " variables, point has " + std::to_string(x.size()));
    }
    Interval acc(0.0, 0.0);
    for (const auto& term : poly.terms) {
        double mono = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mono *= std::pow(x[i] - poly.base_point[i], static_cast<double>(term.alpha[i]));
        }
        acc = add(acc, scalar_mul(mono, term.coeff));
    }
    return acc;
}

std::vector<Interval> term_groups(const ExpansionPolynomial& poly, std::span<const double> x) {
    if (x.size() != poly.base_point.size()) {
        throw invalid_argument("term_groups: dimension mismatch");
    }
    std::vector<Interval> groups(poly.order, Interval(0.0, 0.0));
    for (const auto& term : poly.terms) {
        unsigned deg = 0;
        double mono = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            deg += term.alpha[i];
            mono *= std::pow(x[i] - poly.base_point[i], static_cast<double>(term.alpha[i]));
        }
        groups.at(deg) = add(groups.at(deg), scalar_mul(mono, term.coeff));
    }
    return groups;
}

std::vector<Interval> directional_term_groups(const Expr& e, const EvalPoint& a, const EvalPoint& x, unsigned s) {
    if (a.size() != e.arity() || x.size() != e.arity()) {
        throw invalid_argument("directional_term_groups: dimension mismatch");
    }
    if (s == 0) {
        throw invalid_argument("directional_term_groups: order must be at least 1");
    }
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        v[i] = x[i] - a[i];
    }
    const EndpointJets jets = eval_jets_along(e, a, v, s - 1);
    std::vector<Interval> groups;
    for (unsigned k = 0; k < s; ++k) {
        groups.push_back(bracket(jets.lo.coeff(k), jets.hi.coeff(k)));
    }
    return groups;
}

std::vector<std::pair<unsigned, double>> remainder_decay(const Expr& e, double a, double x, unsigned n_max,
                                                         std::size_t theta_samples) {
    std::vector<std::pair<unsigned, double>> seq;
    for (unsigned n = 1; n <= n_max; ++n) {
        seq.emplace_back(n, magnitude(remainder_hull(e, a, x, n, theta_samples)));
    }
    return seq;
}

EnclosureReport expansion_enclosure(const Expr& e, const EvalPoint& a, const EvalPoint& x, unsigned n,
                                    std::size_t theta_samples) {
    const ExpansionPolynomial poly = e.arity() == 1 ? taylor_1d(e, a[0], n, x[0], theta_samples)
                                                    : taylor_nd(e, a, x, n, theta_samples);
    EnclosureReport r;
    r.lhs = gh_diff(eval_interval(e, x), eval_polynomial(poly, x.coords()));
    r.rhs = *poly.remainder;
    r.tol = 1e-9 * (1.0 + magnitude(r.rhs));
    r.included = is_subset_within(r.lhs, r.rhs, r.tol);
    r.margin = std::min(r.lhs.lo() - r.rhs.lo(), r.rhs.hi() - r.lhs.hi());
    r.theta_samples = theta_samples;
    return r;
}

} // namespace ivexpand
