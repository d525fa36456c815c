#include "ivexpand/interval.hpp"

#include "ivexpand/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ivexpand {

Interval::Interval(double x) : lo_(x), hi_(x) {
    if (std::isnan(x)) {
        throw invalid_argument("interval endpoint is NaN");
    }
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi)) {
        throw invalid_argument("interval endpoint is NaN");
    }
    if (lo > hi) {
        throw invalid_argument("interval lower endpoint exceeds upper endpoint");
    }
}

Interval bracket(double a1, double a2) {
    if (!std::isfinite(a1) || !std::isfinite(a2)) {
        throw invalid_argument("bracket requires finite arguments");
    }
    return a1 <= a2 ? Interval(a1, a2) : Interval(a2, a1);
}

double spread(const Interval& a) noexcept { return a.hi() - a.lo(); }

double magnitude(const Interval& a) noexcept { return std::max(std::fabs(a.lo()), std::fabs(a.hi())); }

double hausdorff(const Interval& a, const Interval& b) noexcept {
    return std::max(std::fabs(a.lo() - b.lo()), std::fabs(a.hi() - b.hi()));
}

Interval gh_diff(const Interval& a, const Interval& b) {
    const double dl = a.lo() - b.lo();
    const double dh = a.hi() - b.hi();
    return dl <= dh ? Interval(dl, dh) : Interval(dh, dl);
}

Interval add(const Interval& a, const Interval& b) { return {a.lo() + b.lo(), a.hi() + b.hi()}; }

Interval neg(const Interval& a) { return {-a.hi(), -a.lo()}; }

Interval scalar_mul(double t, const Interval& b) {
    if (std::isnan(t)) {
        throw invalid_argument("scalar multiplier is NaN");
    }
    if (t == 0.0) {
        return Interval(0.0, 0.0);
    }
    if (t > 0.0) {
        return {t * b.lo(), t * b.hi()};
    }
    return {t * b.hi(), t * b.lo()};
}

Interval mul(const Interval& a, const Interval& b) {
    const double p[4] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
    const auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
    return {*mn, *mx};
}

Interval int_pow(const Interval& a, unsigned k) {
    if (k == 0) {
        return Interval(1.0, 1.0);
    }
    const auto pw = [k](double x) {
        double r = 1.0;
        for (unsigned i = 0; i < k; ++i) {
            r *= x;
        }
        return r;
    };
    if (k % 2 == 1) {
        return {pw(a.lo()), pw(a.hi())};
    }
    const double l = pw(a.lo());
    const double h = pw(a.hi());
    if (a.lo() >= 0.0) {
        return {l, h};
    }
    if (a.hi() <= 0.0) {
        return {h, l};
    }
    return {0.0, std::max(l, h)};
}

const char* to_string(UnaryFn f) noexcept {
    switch (f) {
    case UnaryFn::exp:
        return "exp";
    case UnaryFn::ln:
        return "ln";
    case UnaryFn::sqrt:
        return "sqrt";
    }
    return "?";
}

Interval monotone_unary(UnaryFn f, const Interval& a) {
    switch (f) {
    case UnaryFn::exp:
        return {std::exp(a.lo()), std::exp(a.hi())};
    case UnaryFn::ln:
        if (!(a.lo() > 0.0)) {
            throw domain_error("ln requires a positive argument, got lower endpoint " + std::to_string(a.lo()));
        }
        return {std::log(a.lo()), std::log(a.hi())};
    case UnaryFn::sqrt:
        if (a.lo() < 0.0) {
            throw domain_error("sqrt requires a nonnegative argument, got lower endpoint " +
                               std::to_string(a.lo()));
        }
        return {std::sqrt(a.lo()), std::sqrt(a.hi())};
    }
    throw invalid_argument("unknown unary function");
}

Interval hull(std::span<const Interval> items) {
    if (items.empty()) {
        throw invalid_argument("hull of an empty list");
    }
    double lo = items.front().lo();
    double hi = items.front().hi();
    for (const auto& it : items) {
        lo = std::min(lo, it.lo());
        hi = std::max(hi, it.hi());
    }
    return {lo, hi};
}

bool is_subset_within(const Interval& a, const Interval& b, double tol) {
    if (!(tol >= 0.0)) {
        throw invalid_argument("subset tolerance must be nonnegative");
    }
    return b.lo() - tol <= a.lo() && a.hi() <= b.hi() + tol;
}

IntervalMatrix::IntervalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

Interval linear_comb(std::span<const double> p, std::span<const Interval> q) {
    if (p.size() != q.size()) {
        throw invalid_argument("linear_comb: coefficient count " + std::to_string(p.size()) +
                               " does not match vector length " + std::to_string(q.size()));
    }
    Interval acc(0.0, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc = add(acc, scalar_mul(p[i], q[i]));
    }
    return acc;
}

IntervalVector linear_comb(const std::vector<std::vector<double>>& a, std::span<const Interval> q) {
    if (a.size() != q.size()) {
        throw invalid_argument("linear_comb: matrix has " + std::to_string(a.size()) + " rows, vector has " +
                               std::to_string(q.size()) + " entries");
    }
    const std::size_t cols = a.empty() ? 0 : a.front().size();
    IntervalVector out(cols, Interval(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != cols) {
            throw invalid_argument("linear_comb: matrix is not rectangular");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            out[j] = add(out[j], scalar_mul(a[i][j], q[i]));
        }
    }
    return out;
}

std::string format(const Interval& a, int digits) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.*g, %.*g]", digits, a.lo(), digits, a.hi());
    return buf;
}

std::ostream& operator<<(std::ostream& os, const Interval& a) { return os << format(a); }

} // namespace ivexpand
