#pragma once

#include "ivexpand/dual.hpp"
#include "ivexpand/errors.hpp"
#include "ivexpand/expr.hpp"
#include "ivexpand/interval.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ivexpand {

enum class DerivativeMethod { bracket_ad, numeric_gh_quotient };

const char* to_string(DerivativeMethod m) noexcept;

struct LateralLimits {
    Interval left;   // h -> 0-
    Interval right;  // h -> 0+
};

struct PartialResult {
    Interval value;
    DerivativeMethod method = DerivativeMethod::bracket_ad;
    bool branch_stable = true;
    std::optional<LateralLimits> lateral;
    std::vector<TieLocation> ties;
};

// Difference-quotient schedule for gH derivatives computed as limits.
struct QuotientOptions {
    double h0_scale = 1e-2;  // h0 = h0_scale * (1 + |x_i|)
    int halvings = 20;
    double conv_tol = 1e-7;  // left/right agreement, relative to 1 + magnitude
};

// Thrown when the two one-sided quotient limits disagree.
class derivative_undefined_with_evidence : public derivative_undefined {
public:
    derivative_undefined_with_evidence(const std::string& what, LateralLimits evidence)
        : derivative_undefined(what), evidence_(evidence) {}
    const LateralLimits& evidence() const noexcept { return evidence_; }

private:
    LateralLimits evidence_;
};

// Two-sided limit of (F(h) -gH F(0)) / h, with F(h) = shifted(h). Each side
// is extrapolated from h = +-h0 * 2^-k by an error-controlled Richardson
// tableau on both endpoints.
LateralLimits gh_quotient_limits(const std::function<Interval(double)>& shifted, double h0, int halvings);

Interval gh_quotient_limit(const std::function<Interval(double)>& shifted, double h0,
                           const QuotientOptions& opt = {});

// i is 1-based throughout.
// Bracket of the endpoint partials when the point is branch-stable under
// `tie_tol`, otherwise partial_numeric.
PartialResult partial_gh(const Expr& e, std::size_t i, const EvalPoint& p, const QuotientOptions& opt = {},
                         double tie_tol = default_tie_tol);
PartialResult partial_numeric(const Expr& e, std::size_t i, const EvalPoint& p, const QuotientOptions& opt = {});

IntervalVector gradient(const Expr& e, const EvalPoint& p, const QuotientOptions& opt = {});

// Frozen-branch second-order endpoint derivatives; when the point is a
// branch tie, each entry is the gH quotient limit of the corresponding
// first partial instead (hessian_undefined if that fails too).
IntervalMatrix hessian(const Expr& e, const EvalPoint& p, const QuotientOptions& opt = {});

// All partials of total order `order`, keyed by exponent multi-index.
struct DerivativeTensor {
    unsigned order = 0;
    std::map<MultiIndex, Interval> entries;
};

// derivative_undefined when the point is a branch tie at that order.
DerivativeTensor derivative_tensor(const Expr& e, const EvalPoint& p, unsigned order);

inline constexpr unsigned max_series_order = 24;

struct DirectionalDerivatives {
    std::vector<Interval> values;  // g^(k)(0), k = 0..order
    bool branch_stable = true;
    std::vector<TieLocation> ties;
};

// Derivatives of g(t) = e(a + t v) at t = 0 with the branch frozen at t = 0.
DirectionalDerivatives directional_derivs(const Expr& e, const EvalPoint& a, std::span<const double> v,
                                          unsigned order);

enum class MuVerdict { mu_increasing, mu_decreasing, non_mu_monotonic, unknown };

const char* to_string(MuVerdict v) noexcept;

struct MonotonicityReport {
    std::size_t axis = 1;
    MuVerdict verdict = MuVerdict::unknown;
    std::vector<std::vector<double>> split_points;
    std::size_t evidence_grid = 0;
    std::size_t unstable_samples = 0;
    std::string note;
};

// Sign scan of d(spread)/dx_i = hi_grad[i] - lo_grad[i] over a grid of
// `grid` points per axis.
MonotonicityReport mu_classify(const Expr& e, std::size_t i, std::span<const Interval> box, std::size_t grid);

// Gradient of e(u(t)) at a for real-valued inner functions u.
IntervalVector chain_gradient(const Expr& e, std::span<const Expr> inner, const EvalPoint& a,
                              const QuotientOptions& opt = {});

// Jacobian rows d u_i / d t_j and the image point u(a).
std::pair<std::vector<std::vector<double>>, EvalPoint> real_jacobian(std::span<const Expr> inner, const EvalPoint& a);

// (g f)'(p) = [(g f_lo)'(p) v (g f_hi)'(p)] for real g and mu-monotone f.
Interval real_product_derivative(const Expr& g, const Expr& f, double p);

} // namespace ivexpand
