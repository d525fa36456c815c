#include "ivexpand/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ivexpand {

namespace {

std::string describe_ties(const std::vector<TieLocation>& ties) {
    std::string s;
    for (const auto& t : ties) {
        if (!s.empty()) {
            s += "; ";
        }
        s += "node " + std::to_string(t.node_id) + " (" + t.node + ")";
    }
    return s;
}

void check_axis(const Expr& e, std::size_t i) {
    if (i == 0 || i > e.arity()) {
        throw invalid_argument("axis " + std::to_string(i) + " out of range 1.." + std::to_string(e.arity()));
    }
}

// Richardson tableau over q_k = q(h0 2^-k); returns the entry with the
// smallest estimated error.
double extrapolate(const std::vector<double>& q) {
    constexpr std::size_t max_cols = 4;
    std::vector<std::vector<double>> t(q.size());
    double best = q.back();
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < q.size(); ++k) {
        t[k].push_back(q[k]);
        double scale = 1.0;
        for (std::size_t j = 1; j <= std::min(k, max_cols); ++j) {
            scale *= 2.0;
            const double v = (scale * t[k][j - 1] - t[k - 1][j - 1]) / (scale - 1.0);
            t[k].push_back(v);
            const double err = std::max(std::fabs(v - t[k][j - 1]), std::fabs(v - t[k - 1][j - 1]));
            if (err < best_err) {
                best_err = err;
                best = v;
            }
        }
    }
    return best;
}

Interval one_side(const std::function<Interval(double)>& shifted, const Interval& f0, double h0, int halvings) {
    std::vector<double> lo;
    std::vector<double> hi;
    double h = h0;
    for (int k = 0; k <= halvings; ++k, h *= 0.5) {
        Interval fh;
        try {
            fh = shifted(h);
        } catch (const domain_error&) {
            // Too large a step left the domain; restart the sequence.
            lo.clear();
            hi.clear();
            continue;
        }
        const Interval q = scalar_mul(1.0 / h, gh_diff(fh, f0));
        lo.push_back(q.lo());
        hi.push_back(q.hi());
    }
    if (lo.size() < 3) {
        throw derivative_undefined("difference quotient leaves the function domain");
    }
    const double a = extrapolate(lo);
    const double b = extrapolate(hi);
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw derivative_undefined("difference quotient is not finite");
    }
    return bracket(a, b);
}

double spread_slope(const DualEndpoint& d, std::size_t ii) { return d.hi_grad[ii] - d.lo_grad[ii]; }

} // namespace

const char* to_string(DerivativeMethod m) noexcept {
    return m == DerivativeMethod::bracket_ad ? "bracket-AD" : "numeric-gH-quotient";
}

const char* to_string(MuVerdict v) noexcept {
    switch (v) {
    case MuVerdict::mu_increasing:
        return "mu-increasing";
    case MuVerdict::mu_decreasing:
        return "mu-decreasing";
    case MuVerdict::non_mu_monotonic:
        return "non-mu-monotonic";
    case MuVerdict::unknown:
        return "unknown";
    }
    return "unknown";
}

LateralLimits gh_quotient_limits(const std::function<Interval(double)>& shifted, double h0, int halvings) {
    if (!(h0 > 0.0) || halvings < 2) {
        throw invalid_argument("quotient schedule needs h0 > 0 and at least 2 halvings");
    }
    const Interval f0 = shifted(0.0);
    return {one_side(shifted, f0, -h0, halvings), one_side(shifted, f0, h0, halvings)};
}

Interval gh_quotient_limit(const std::function<Interval(double)>& shifted, double h0, const QuotientOptions& opt) {
    const LateralLimits lat = gh_quotient_limits(shifted, h0, opt.halvings);
    const double scale = 1.0 + std::max(magnitude(lat.left), magnitude(lat.right));
    if (hausdorff(lat.left, lat.right) > opt.conv_tol * scale) {
        std::ostringstream msg;
        msg << "one-sided gH quotient limits disagree: left " << format(lat.left, 10) << ", right "
            << format(lat.right, 10);
        throw derivative_undefined_with_evidence(msg.str(), lat);
    }
    return {0.5 * (lat.left.lo() + lat.right.lo()), 0.5 * (lat.left.hi() + lat.right.hi())};
}

PartialResult partial_numeric(const Expr& e, std::size_t i, const EvalPoint& p, const QuotientOptions& opt) {
    check_axis(e, i);
    const double h0 = opt.h0_scale * (1.0 + std::fabs(p[i - 1]));
    const auto shifted = [&](double h) { return eval_interval(e, perturb(p, i, h)); };
    PartialResult r;
    r.method = DerivativeMethod::numeric_gh_quotient;
    try {
        r.value = gh_quotient_limit(shifted, h0, opt);
    } catch (const derivative_undefined_with_evidence& err) {
        throw derivative_undefined_with_evidence("partial derivative with respect to x" + std::to_string(i) +
                                                     " does not exist: " + err.what(),
                                                 err.evidence());
    }
    r.lateral = gh_quotient_limits(shifted, h0, opt.halvings);
    return r;
}

PartialResult partial_gh(const Expr& e, std::size_t i, const EvalPoint& p, const QuotientOptions& opt,
                         double tie_tol) {
    check_axis(e, i);
    const DualEndpoint d = eval_dual(e, p, tie_tol);
    if (d.branch_stable) {
        PartialResult r;
        r.value = bracket(d.lo_grad[i - 1], d.hi_grad[i - 1]);
        return r;
    }
    PartialResult r = partial_numeric(e, i, p, opt);
    r.branch_stable = false;
    r.ties = d.tie_locations;
    return r;
}

IntervalVector gradient(const Expr& e, const EvalPoint& p, const QuotientOptions& opt) {
    IntervalVector g;
    g.reserve(e.arity());
    for (std::size_t i = 1; i <= e.arity(); ++i) {
        g.push_back(partial_gh(e, i, p, opt).value);
    }
    return g;
}

IntervalMatrix hessian(const Expr& e, const EvalPoint& p, const QuotientOptions& opt) {
    const std::size_t n = e.arity();
    IntervalMatrix h(n, n);
    const EndpointJets jets = eval_jets_at(e, p, 2);
    if (jets.branch_stable) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                MultiIndex alpha(n, 0);
                ++alpha[i];
                ++alpha[j];
                h(i, j) = bracket(jets.lo.derivative(alpha), jets.hi.derivative(alpha));
            }
        }
        return h;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            // Off the tie only exact ties fall back to the quotient.
            const auto first = [&](double step) {
                return partial_gh(e, i, perturb(p, j, step), opt, step == 0.0 ? default_tie_tol : 0.0).value;
            };
            try {
                h(i - 1, j - 1) = gh_quotient_limit(first, opt.h0_scale * (1.0 + std::fabs(p[j - 1])), opt);
            } catch (const math_error& err) {
                throw hessian_undefined("second partial (" + std::to_string(i) + "," + std::to_string(j) +
                                        ") undefined at a branch tie [" + describe_ties(jets.ties) +
                                        "]: " + err.what());
            }
        }
    }
    return h;
}

DerivativeTensor derivative_tensor(const Expr& e, const EvalPoint& p, unsigned order) {
    if (order > max_series_order) {
        throw invalid_argument("derivative order " + std::to_string(order) + " exceeds the supported maximum " +
                               std::to_string(max_series_order));
    }
    const EndpointJets jets = eval_jets_at(e, p, order);
    if (!jets.branch_stable) {
        throw derivative_undefined("order-" + std::to_string(order) +
                                   " endpoint derivatives do not exist at a branch tie: " + describe_ties(jets.ties));
    }
    DerivativeTensor t;
    t.order = order;
    const JetLayout& layout = jets.lo.layout();
    for (std::size_t k = 0; k < layout.size(); ++k) {
        if (layout.total_degree(k) == order) {
            const MultiIndex& alpha = layout.monomial(k);
            t.entries.emplace(alpha, bracket(jets.lo.derivative(alpha), jets.hi.derivative(alpha)));
        }
    }
    return t;
}

DirectionalDerivatives directional_derivs(const Expr& e, const EvalPoint& a, std::span<const double> v,
                                          unsigned order) {
    if (order > max_series_order) {
        throw invalid_argument("series order " + std::to_string(order) + " exceeds the supported maximum " +
                               std::to_string(max_series_order));
    }
    const EndpointJets jets = eval_jets_along(e, a, v, order);
    DirectionalDerivatives d;
    d.branch_stable = jets.branch_stable;
    d.ties = jets.ties;
    double fact = 1.0;
    for (unsigned k = 0; k <= order; ++k) {
        if (k > 1) {
            fact *= k;
        }
        d.values.push_back(bracket(fact * jets.lo.coeff(k), fact * jets.hi.coeff(k)));
    }
    return d;
}

MonotonicityReport mu_classify(const Expr& e, std::size_t i, std::span<const Interval> box, std::size_t grid) {
    check_axis(e, i);
    if (box.size() != e.arity()) {
        throw invalid_argument("box dimension " + std::to_string(box.size()) + " does not match arity " +
                               std::to_string(e.arity()));
    }
    if (grid < 3) {
        throw invalid_argument("mu_classify needs a grid of at least 3 points per axis");
    }
    const std::size_t ii = i - 1;
    MonotonicityReport rep;
    rep.axis = i;
    rep.evidence_grid = grid;

    const std::vector<EvalPoint> pts = grid_points(box, grid);
    std::vector<double> slope(pts.size(), 0.0);
    std::vector<bool> usable(pts.size(), false);
    double scale = 0.0;
    const double center = box[ii].mid();
    const double nudge = 1e-7 * (spread(box[ii]) + std::fabs(center) + 1e-300);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        // A sample on a branch tie is retried slightly toward the box center
        // along the axis, which gives the one-sided slope inside the box.
        const double dir = pts[k][ii] <= center ? 1.0 : -1.0;
        for (const double shift : {0.0, dir * nudge}) {
            try {
                const DualEndpoint d = eval_dual(e, shift == 0.0 ? pts[k] : perturb(pts[k], i, shift));
                if (d.branch_stable) {
                    slope[k] = spread_slope(d, ii);
                    usable[k] = std::isfinite(slope[k]);
                }
            } catch (const domain_error&) {
            }
            if (usable[k]) {
                scale = std::max(scale, std::fabs(slope[k]));
                break;
            }
        }
        if (!usable[k]) {
            ++rep.unstable_samples;
        }
    }
    const double tol = 1e-10 * (1.0 + scale);
    const auto sign = [tol](double s) { return s > tol ? 1 : (s < -tol ? -1 : 0); };

    bool any_pos = false;
    bool any_neg = false;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (usable[k]) {
            any_pos = any_pos || sign(slope[k]) > 0;
            any_neg = any_neg || sign(slope[k]) < 0;
        }
    }

    if (any_pos && any_neg) {
        rep.verdict = MuVerdict::non_mu_monotonic;
        // Lines parallel to axis i: refine each sign change by bisection.
        std::size_t stride = 1;
        for (std::size_t k = ii + 1; k < box.size(); ++k) {
            stride *= grid;
        }
        for (std::size_t start = 0; start < pts.size(); ++start) {
            if ((start / stride) % grid != 0) {
                continue;
            }
            std::size_t prev = pts.size();
            for (std::size_t m = 0; m < grid; ++m) {
                const std::size_t k = start + m * stride;
                if (!usable[k] || sign(slope[k]) == 0) {
                    continue;
                }
                if (prev != pts.size() && sign(slope[prev]) != sign(slope[k])) {
                    double c0 = pts[prev][ii];
                    double c1 = pts[k][ii];
                    const int s0 = sign(slope[prev]);
                    for (int it = 0; it < 40; ++it) {
                        const double mid = 0.5 * (c0 + c1);
                        int sm = 0;
                        try {
                            sm = sign(spread_slope(eval_dual(e, perturb(pts[k], i, mid - pts[k][ii])), ii));
                        } catch (const domain_error&) {
                            break;
                        }
                        if (sm == 0) {
                            c0 = c1 = mid;
                            break;
                        }
                        (sm == s0 ? c0 : c1) = mid;
                    }
                    std::vector<double> split(pts[k].coords().begin(), pts[k].coords().end());
                    split[ii] = 0.5 * (c0 + c1);
                    rep.split_points.push_back(std::move(split));
                }
                prev = k;
            }
        }
        return rep;
    }
    if (rep.unstable_samples > 0) {
        rep.verdict = MuVerdict::unknown;
        rep.note = std::to_string(rep.unstable_samples) + " grid samples at branch ties or outside the domain";
        return rep;
    }
    if (any_neg) {
        rep.verdict = MuVerdict::mu_decreasing;
    } else {
        rep.verdict = MuVerdict::mu_increasing;
        if (!any_pos) {
            rep.note = "spread is constant along the axis; mu-increasing and mu-decreasing both hold";
        }
    }
    return rep;
}

std::pair<std::vector<std::vector<double>>, EvalPoint> real_jacobian(std::span<const Expr> inner,
                                                                     const EvalPoint& a) {
    std::vector<std::vector<double>> du;
    std::vector<double> x0;
    for (std::size_t k = 0; k < inner.size(); ++k) {
        const Expr& u = inner[k];
        if (!u.is_real_valued()) {
            throw invalid_argument("inner function " + std::to_string(k + 1) + " has interval coefficients (" +
                                   print(u) + "); it must be real-valued");
        }
        const EndpointJets j = eval_jets_at(u, a, 1);
        if (j.lo.value() != j.hi.value()) {
            throw invalid_argument("inner function " + std::to_string(k + 1) + " is not degenerate at the point");
        }
        std::vector<double> row(a.size());
        for (std::size_t c = 0; c < a.size(); ++c) {
            row[c] = j.lo.partial(c);
        }
        du.push_back(std::move(row));
        x0.push_back(j.lo.value());
    }
    return {std::move(du), EvalPoint(std::move(x0))};
}

IntervalVector chain_gradient(const Expr& e, std::span<const Expr> inner, const EvalPoint& a,
                              const QuotientOptions& opt) {
    if (inner.size() != e.arity()) {
        throw invalid_argument("chain_gradient: " + std::to_string(inner.size()) +
                               " inner functions for an outer function of arity " + std::to_string(e.arity()));
    }
    for (const auto& u : inner) {
        if (u.arity() != a.size()) {
            throw invalid_argument("chain_gradient: inner arity does not match the point dimension");
        }
    }
    const auto [du, x0] = real_jacobian(inner, a);
    return linear_comb(du, gradient(e, x0, opt));
}

Interval real_product_derivative(const Expr& g, const Expr& f, double p) {
    if (g.arity() != 1 || f.arity() != 1) {
        throw invalid_argument("real_product_derivative needs single-variable functions");
    }
    if (!g.is_real_valued()) {
        throw invalid_argument("multiplier " + print(g) + " must be real-valued");
    }
    const double delta = 1e-3 * (1.0 + std::fabs(p));
    const Interval box[1] = {Interval(p - delta, p + delta)};
    const MonotonicityReport mono = mu_classify(f, 1, box, 9);
    if (mono.verdict != MuVerdict::mu_increasing && mono.verdict != MuVerdict::mu_decreasing) {
        throw precondition_violated(print(f) + " is not mu-monotonic near " + std::to_string(p) + " (verdict " +
                                    to_string(mono.verdict) + ")");
    }
    const EvalPoint at{p};
    const EndpointJets gj = eval_jets_at(g, at, 1);
    const EndpointJets fj = eval_jets_at(f, at, 1);
    if (!fj.branch_stable) {
        throw precondition_violated("endpoint functions of " + print(f) + " are not differentiable at " +
                                    std::to_string(p));
    }
    const double gv = gj.lo.value();
    const double gd = gj.lo.partial(0);
    return bracket(gd * fj.lo.value() + gv * fj.lo.partial(0), gd * fj.hi.value() + gv * fj.hi.partial(0));
}

} // namespace ivexpand
