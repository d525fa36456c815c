#include "ivexpand/jet.hpp"

#include "ivexpand/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace ivexpand {

namespace {

void enumerate(std::size_t nvars, unsigned remaining, std::size_t var, MultiIndex& cur,
               std::vector<MultiIndex>& out) {
    if (var + 1 == nvars) {
        cur[var] = static_cast<std::uint8_t>(remaining);
        out.push_back(cur);
        return;
    }
    for (unsigned e = remaining + 1; e-- > 0;) {
        cur[var] = static_cast<std::uint8_t>(e);
        enumerate(nvars, remaining - e, var + 1, cur, out);
    }
}

double factorial(unsigned n) {
    double r = 1.0;
    for (unsigned k = 2; k <= n; ++k) {
        r *= k;
    }
    return r;
}

// sum_k f[k] * delta^k by Horner; delta has zero constant term.
Jet compose(const Jet& u, const std::vector<double>& f) {
    Jet delta = u;
    delta.coeff(0) = 0.0;
    Jet acc = Jet::constant(u.layout_ptr(), f.back());
    for (std::size_t k = f.size() - 1; k-- > 0;) {
        acc = acc * delta;
        acc.coeff(0) += f[k];
    }
    return acc;
}

} // namespace

JetLayout::JetLayout(std::size_t nvars, unsigned degree) : nvars_(nvars), degree_(degree) {
    if (nvars == 0) {
        throw invalid_argument("jet needs at least one variable");
    }
    for (unsigned d = 0; d <= degree; ++d) {
        MultiIndex cur(nvars, 0);
        std::vector<MultiIndex> level;
        enumerate(nvars, d, 0, cur, level);
        for (auto& m : level) {
            monomials_.push_back(std::move(m));
            degrees_.push_back(d);
        }
    }
    std::map<MultiIndex, std::uint32_t> pos;
    for (std::size_t k = 0; k < monomials_.size(); ++k) {
        pos.emplace(monomials_[k], static_cast<std::uint32_t>(k));
    }
    MultiIndex sum(nvars);
    for (std::size_t a = 0; a < monomials_.size(); ++a) {
        for (std::size_t b = 0; b < monomials_.size(); ++b) {
            if (degrees_[a] + degrees_[b] > degree) {
                continue;
            }
            for (std::size_t v = 0; v < nvars; ++v) {
                sum[v] = static_cast<std::uint8_t>(monomials_[a][v] + monomials_[b][v]);
            }
            products_.push_back(
                {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), pos.at(sum)});
        }
    }
}

std::shared_ptr<const JetLayout> JetLayout::get(std::size_t nvars, unsigned degree) {
    static std::mutex mtx;
    static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard lock(mtx);
    auto& slot = cache[{nvars, degree}];
    if (!slot) {
        slot = std::make_shared<const JetLayout>(nvars, degree);
    }
    return slot;
}

std::size_t JetLayout::index_of(const MultiIndex& alpha) const {
    if (alpha.size() != nvars_) {
        throw invalid_argument("multi-index has " + std::to_string(alpha.size()) + " entries, expected " +
                               std::to_string(nvars_));
    }
    const auto it = std::find(monomials_.begin(), monomials_.end(), alpha);
    if (it == monomials_.end()) {
        throw invalid_argument("multi-index exceeds jet degree " + std::to_string(degree_));
    }
    return static_cast<std::size_t>(it - monomials_.begin());
}

Jet::Jet(std::shared_ptr<const JetLayout> layout, double value)
    : layout_(std::move(layout)), coeffs_(layout_->size(), 0.0) {
    coeffs_[0] = value;
}

Jet Jet::constant(std::shared_ptr<const JetLayout> layout, double value) { return Jet(std::move(layout), value); }

Jet Jet::variable(std::shared_ptr<const JetLayout> layout, std::size_t i, double value) {
    Jet j(layout, value);
    if (layout->degree() >= 1) {
        MultiIndex e(layout->nvars(), 0);
        e.at(i) = 1;
        j.coeffs_[layout->index_of(e)] = 1.0;
    }
    return j;
}

double Jet::derivative(const MultiIndex& alpha) const {
    double f = 1.0;
    for (auto a : alpha) {
        f *= factorial(a);
    }
    return f * coeff(alpha);
}

double Jet::partial(std::size_t i) const {
    MultiIndex e(layout_->nvars(), 0);
    e.at(i) = 1;
    return coeff(e);
}

bool Jet::is_constant() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

Jet& Jet::operator+=(const Jet& o) {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k] += o.coeffs_[k];
    }
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k] -= o.coeffs_[k];
    }
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (auto& c : coeffs_) {
        c *= s;
    }
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.layout_, 0.0);
    for (const auto& p : a.layout_->products()) {
        r.coeffs_[p.out] += a.coeffs_[p.a] * b.coeffs_[p.b];
    }
    return r;
}

Jet pow(const Jet& base, unsigned k) {
    Jet r = Jet::constant(base.layout_ptr(), 1.0);
    for (unsigned i = 0; i < k; ++i) {
        r = r * base;
    }
    return r;
}

Jet exp(const Jet& u) {
    const unsigned d = u.layout().degree();
    const double e0 = std::exp(u.value());
    std::vector<double> f(d + 1);
    for (unsigned k = 0; k <= d; ++k) {
        f[k] = e0 / factorial(k);
    }
    return compose(u, f);
}

Jet log(const Jet& u) {
    const double u0 = u.value();
    if (!(u0 > 0.0)) {
        throw domain_error("ln requires a positive argument, got " + std::to_string(u0));
    }
    const unsigned d = u.layout().degree();
    std::vector<double> f(d + 1);
    f[0] = std::log(u0);
    double p = 1.0;
    for (unsigned k = 1; k <= d; ++k) {
        p *= u0;
        f[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * p);
    }
    return compose(u, f);
}

Jet sqrt(const Jet& u) {
    const double u0 = u.value();
    const unsigned d = u.layout().degree();
    if (u0 < 0.0 || (u0 == 0.0 && d > 0)) {
        throw domain_error("sqrt requires a positive argument for differentiation, got " + std::to_string(u0));
    }
    std::vector<double> f(d + 1);
    f[0] = std::sqrt(u0);
    // binom(1/2, k) * u0^(1/2 - k)
    double binom = 1.0;
    for (unsigned k = 1; k <= d; ++k) {
        binom *= (0.5 - (k - 1)) / k;
        f[k] = binom * f[0] / std::pow(u0, static_cast<double>(k));
    }
    return compose(u, f);
}

bool jets_close(const Jet& a, const Jet& b, double tol) {
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    for (std::size_t k = 0; k < ca.size(); ++k) {
        if (std::fabs(ca[k] - cb[k]) > tol * (1.0 + std::max(std::fabs(ca[k]), std::fabs(cb[k])))) {
            return false;
        }
    }
    return true;
}

} // namespace ivexpand
