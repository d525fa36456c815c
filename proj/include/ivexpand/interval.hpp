#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ivexpand {

// Closed real interval [lo, hi] with lo <= hi.
//
// Arithmetic is plain round-to-nearest floating point; enclosures built on
// top of it are tolerance-checked, not rigorous.
class Interval {
public:
    constexpr Interval() = default;
    // Degenerate interval [x, x].
    explicit Interval(double x);
    // Throws invalid_argument unless lo <= hi.
    Interval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double mid() const noexcept { return 0.5 * (lo_ + hi_); }
    bool is_degenerate() const noexcept { return lo_ == hi_; }
    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

// [min(a1, a2), max(a1, a2)]; both arguments must be finite.
Interval bracket(double a1, double a2);

double spread(const Interval& a) noexcept;
double magnitude(const Interval& a) noexcept;
double hausdorff(const Interval& a, const Interval& b) noexcept;

// Generalized Hukuhara difference a -gH b.
Interval gh_diff(const Interval& a, const Interval& b);

Interval add(const Interval& a, const Interval& b);
Interval neg(const Interval& a);
Interval scalar_mul(double t, const Interval& b);
Interval mul(const Interval& a, const Interval& b);
Interval int_pow(const Interval& a, unsigned k);

enum class UnaryFn { exp, ln, sqrt };

const char* to_string(UnaryFn f) noexcept;

// Range of a monotone increasing map; domain_error outside the domain.
Interval monotone_unary(UnaryFn f, const Interval& a);

// Throws invalid_argument on an empty list.
Interval hull(std::span<const Interval> items);

// b.lo - tol <= a.lo && a.hi <= b.hi + tol.
bool is_subset_within(const Interval& a, const Interval& b, double tol);

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a) { return neg(a); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }
inline Interval operator*(double t, const Interval& b) { return scalar_mul(t, b); }

using IntervalVector = std::vector<Interval>;

// Rectangular grid of intervals, row-major.
class IntervalMatrix {
public:
    IntervalMatrix() = default;
    IntervalMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Interval& operator()(std::size_t r, std::size_t c) { return data_.at(r * cols_ + c); }
    const Interval& operator()(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }

    friend bool operator==(const IntervalMatrix&, const IntervalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Interval> data_;
};

// sum_i p_i (.) q_i
Interval linear_comb(std::span<const double> p, std::span<const Interval> q);

// A^T q for a real matrix A given as rows (A has q.size() rows). Entry j of
// the result is sum_i A[i][j] (.) q_i.
IntervalVector linear_comb(const std::vector<std::vector<double>>& a, std::span<const Interval> q);

// "[lo, hi]" with the requested number of significant digits.
std::string format(const Interval& a, int digits = 6);
std::ostream& operator<<(std::ostream& os, const Interval& a);

} // namespace ivexpand
