#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ivexpand {

using MultiIndex = std::vector<std::uint8_t>;

// Enumeration of monomials of total degree <= degree in nvars variables,
// graded (by total degree, then lexicographically descending), with a
// precomputed product table. Layouts are interned and shared.
class JetLayout {
public:
    static std::shared_ptr<const JetLayout> get(std::size_t nvars, unsigned degree);

    std::size_t nvars() const noexcept { return nvars_; }
    unsigned degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return monomials_.size(); }

    const MultiIndex& monomial(std::size_t k) const { return monomials_.at(k); }
    unsigned total_degree(std::size_t k) const { return degrees_.at(k); }
    // Position of a multi-index; throws invalid_argument when out of range.
    std::size_t index_of(const MultiIndex& alpha) const;

    struct Product {
        std::uint32_t a;
        std::uint32_t b;
        std::uint32_t out;
    };
    const std::vector<Product>& products() const noexcept { return products_; }

    JetLayout(std::size_t nvars, unsigned degree);

private:
    std::size_t nvars_;
    unsigned degree_;
    std::vector<MultiIndex> monomials_;
    std::vector<unsigned> degrees_;
    std::vector<Product> products_;
};

// Truncated multivariate Taylor polynomial. Coefficient k multiplies the
// monomial (dx)^alpha_k, so the partial derivative of order alpha equals
// alpha! * coefficient.
class Jet {
public:
    Jet() = default;
    explicit Jet(std::shared_ptr<const JetLayout> layout, double value = 0.0);

    static Jet constant(std::shared_ptr<const JetLayout> layout, double value);
    // value + d(variable i).
    static Jet variable(std::shared_ptr<const JetLayout> layout, std::size_t i, double value);

    const JetLayout& layout() const { return *layout_; }
    const std::shared_ptr<const JetLayout>& layout_ptr() const noexcept { return layout_; }

    double value() const { return coeffs_.at(0); }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double coeff(std::size_t k) const { return coeffs_.at(k); }
    double& coeff(std::size_t k) { return coeffs_.at(k); }
    double coeff(const MultiIndex& alpha) const { return coeffs_.at(layout_->index_of(alpha)); }
    // alpha! * coeff(alpha)
    double derivative(const MultiIndex& alpha) const;
    // First partial with respect to variable i (needs degree >= 1).
    double partial(std::size_t i) const;

    bool is_constant() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator-(Jet a) { return a *= -1.0; }

private:
    std::shared_ptr<const JetLayout> layout_;
    std::vector<double> coeffs_;
};

Jet pow(const Jet& base, unsigned k);
Jet exp(const Jet& u);
// domain_error when value <= 0.
Jet log(const Jet& u);
// domain_error when value < 0, or value == 0 with nonzero degree.
Jet sqrt(const Jet& u);

// Coefficientwise |a_k - b_k| <= tol * (1 + max(|a_k|, |b_k|)).
bool jets_close(const Jet& a, const Jet& b, double tol);

} // namespace ivexpand
