#include "ivexpand/dual.hpp"

#include "ivexpand/errors.hpp"

#include <cmath>
#include <utility>

namespace ivexpand {

namespace {

struct Pair {
    Jet lo;
    Jet hi;
};

class JetEvaluator {
public:
    JetEvaluator(std::span<const Jet> vars, double tie_tol, EndpointJets& out)
        : vars_(vars), tol_(tie_tol), out_(out) {}

    Pair eval(const Node& n) {
        const std::size_t id = next_id_++;
        switch (n.kind) {
        case NodeKind::interval_lit:
        case NodeKind::real_lit:
            return {Jet::constant(layout(), n.literal.lo()), Jet::constant(layout(), n.literal.hi())};
        case NodeKind::var:
            return {vars_[n.var - 1], vars_[n.var - 1]};
        case NodeKind::add: {
            Pair a = eval(*n.children[0]);
            Pair b = eval(*n.children[1]);
            return {a.lo + b.lo, a.hi + b.hi};
        }
        case NodeKind::sub: {
            Pair a = eval(*n.children[0]);
            Pair b = eval(*n.children[1]);
            return {a.lo - b.hi, a.hi - b.lo};
        }
        case NodeKind::mul: {
            Pair a = eval(*n.children[0]);
            Pair b = eval(*n.children[1]);
            const Jet cands[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
            const std::size_t lo = select(cands, true, n, id);
            const std::size_t hi = select(cands, false, n, id);
            out_.signature.push_back(static_cast<std::uint8_t>(lo * 4 + hi));
            return {cands[lo], cands[hi]};
        }
        case NodeKind::ghdiff: {
            Pair a = eval(*n.children[0]);
            Pair b = eval(*n.children[1]);
            const Jet cands[2] = {a.lo - b.lo, a.hi - b.hi};
            const std::size_t lo = select(cands, true, n, id);
            const std::size_t hi = select(cands, false, n, id);
            out_.signature.push_back(static_cast<std::uint8_t>(lo * 2 + hi));
            return {cands[lo], cands[hi]};
        }
        case NodeKind::int_pow:
            return power(eval(*n.children[0]), n, id);
        case NodeKind::unary: {
            Pair a = eval(*n.children[0]);
            switch (n.fn) {
            case UnaryFn::exp:
                return {exp(a.lo), exp(a.hi)};
            case UnaryFn::ln:
                return {log(a.lo), log(a.hi)};
            case UnaryFn::sqrt:
                return {sqrt(a.lo), sqrt(a.hi)};
            }
            break;
        }
        }
        throw invalid_argument("unknown node kind");
    }

private:
    const std::shared_ptr<const JetLayout>& layout() const { return vars_.front().layout_ptr(); }

    bool near(double a, double b) const { return std::fabs(a - b) <= tol_ * (1.0 + std::fabs(b)); }

    void record_tie(const Node& n, std::size_t id) {
        out_.branch_stable = false;
        if (out_.ties.empty() || out_.ties.back().node_id != id) {
            out_.ties.push_back({id, print(n)});
        }
    }

    // First extreme candidate in the fixed candidate order; any competitor
    // within the tie tolerance whose expansion differs marks a tie.
    std::size_t select(std::span<const Jet> cands, bool want_min, const Node& n, std::size_t id) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < cands.size(); ++k) {
            const double v = cands[k].value();
            if (want_min ? v < cands[best].value() : v > cands[best].value()) {
                best = k;
            }
        }
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (k != best && near(cands[k].value(), cands[best].value()) && !jets_close(cands[k], cands[best], tol_)) {
                record_tie(n, id);
                break;
            }
        }
        return best;
    }

    Pair power(const Pair& a, const Node& n, std::size_t id) {
        const unsigned k = n.power;
        if (k == 0) {
            return {Jet::constant(layout(), 1.0), Jet::constant(layout(), 1.0)};
        }
        Jet pl = pow(a.lo, k);
        Jet ph = pow(a.hi, k);
        if (k % 2 == 1) {
            return {std::move(pl), std::move(ph)};
        }
        const double l = a.lo.value();
        const double h = a.hi.value();
        const Jet zero = Jet::constant(layout(), 0.0);

        // Lower endpoint: l^k when l >= 0, h^k when h <= 0, else 0.
        std::uint8_t lower_case = 2;
        const Jet* lower = &zero;
        if (l >= 0.0) {
            lower_case = 0;
            lower = &pl;
        } else if (h <= 0.0) {
            lower_case = 1;
            lower = &ph;
        }
        // A base whose endpoint expansions coincide is a real function and
        // cannot straddle zero.
        const bool real_base = jets_close(a.lo, a.hi, tol_);
        const bool near_l0 = !real_base && std::fabs(l) <= tol_;
        const bool near_h0 = !real_base && std::fabs(h) <= tol_;
        const Jet* alternatives[3] = {(near_l0 || l >= 0.0) ? &pl : nullptr, (near_h0 || h <= 0.0) ? &ph : nullptr,
                                      (near_l0 || near_h0 || (l < 0.0 && h > 0.0)) ? &zero : nullptr};
        for (const Jet* alt : alternatives) {
            if (alt != nullptr && alt != lower && !jets_close(*alt, *lower, tol_)) {
                record_tie(n, id);
                break;
            }
        }

        const Jet cands[2] = {pl, ph};
        const std::size_t upper = select(cands, false, n, id);
        // Every case of a real base yields the same expansion, so its sign
        // is not a branch choice.
        out_.signature.push_back(real_base ? std::uint8_t{0xFF} : static_cast<std::uint8_t>(lower_case * 2 + upper));
        return {*lower, cands[upper]};
    }

    std::span<const Jet> vars_;
    double tol_;
    EndpointJets& out_;
    std::size_t next_id_ = 0;
};

} // namespace

EndpointJets eval_jets(const Expr& e, std::span<const Jet> vars, double tie_tol) {
    if (vars.size() != e.arity()) {
        throw invalid_argument("eval_jets: " + std::to_string(vars.size()) + " variable jets for arity " +
                               std::to_string(e.arity()));
    }
    for (const auto& v : vars) {
        if (v.layout_ptr() != vars.front().layout_ptr()) {
            throw invalid_argument("eval_jets: variable jets use different layouts");
        }
    }
    EndpointJets out;
    JetEvaluator ev(vars, tie_tol, out);
    Pair r = ev.eval(e.root());
    out.lo = std::move(r.lo);
    out.hi = std::move(r.hi);
    return out;
}

EndpointJets eval_jets_at(const Expr& e, const EvalPoint& p, unsigned degree, double tie_tol) {
    if (p.size() != e.arity()) {
        throw invalid_argument("point has " + std::to_string(p.size()) + " coordinates, expression arity is " +
                               std::to_string(e.arity()));
    }
    const auto layout = JetLayout::get(e.arity(), degree);
    std::vector<Jet> vars;
    vars.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        vars.push_back(Jet::variable(layout, i, p[i]));
    }
    return eval_jets(e, vars, tie_tol);
}

EndpointJets eval_jets_along(const Expr& e, const EvalPoint& a, std::span<const double> v, unsigned degree,
                             double tie_tol) {
    if (a.size() != e.arity() || v.size() != e.arity()) {
        throw invalid_argument("direction and base point must match the expression arity " +
                               std::to_string(e.arity()));
    }
    const auto layout = JetLayout::get(1, degree);
    std::vector<Jet> vars;
    vars.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Jet j = Jet::constant(layout, a[i]);
        if (degree >= 1) {
            j.coeff(1) = v[i];
        }
        vars.push_back(std::move(j));
    }
    return eval_jets(e, vars, tie_tol);
}

DualEndpoint eval_dual(const Expr& e, const EvalPoint& p, double tie_tol) {
    EndpointJets j = eval_jets_at(e, p, 1, tie_tol);
    DualEndpoint d;
    d.lo_val = j.lo.value();
    d.hi_val = j.hi.value();
    d.lo_grad.resize(e.arity());
    d.hi_grad.resize(e.arity());
    for (std::size_t i = 0; i < e.arity(); ++i) {
        d.lo_grad[i] = j.lo.partial(i);
        d.hi_grad[i] = j.hi.partial(i);
    }
    d.branch_stable = j.branch_stable;
    d.tie_locations = std::move(j.ties);
    d.signature = std::move(j.signature);
    return d;
}

std::vector<EvalPoint> grid_points(std::span<const Interval> box, std::size_t samples) {
    if (box.empty()) {
        throw invalid_argument("grid over an empty box");
    }
    if (samples == 0) {
        throw invalid_argument("grid needs at least one sample per axis");
    }
    const std::size_t n = box.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= samples;
    }
    std::vector<EvalPoint> pts;
    pts.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Interval& b = box[i];
            c[i] = samples == 1 ? b.mid()
                                : b.lo() + (b.hi() - b.lo()) * static_cast<double>(idx[i]) /
                                               static_cast<double>(samples - 1);
        }
        pts.emplace_back(std::move(c));
        for (std::size_t i = n; i-- > 0;) {
            if (++idx[i] < samples) {
                break;
            }
            idx[i] = 0;
        }
    }
    return pts;
}

StabilityScan branch_stability(const Expr& e, std::span<const Interval> box, std::size_t samples, double tie_tol) {
    if (box.size() != e.arity()) {
        throw invalid_argument("box dimension " + std::to_string(box.size()) + " does not match arity " +
                               std::to_string(e.arity()));
    }
    if (samples < 2) {
        throw invalid_argument("branch_stability needs at least 2 samples per axis");
    }
    StabilityScan scan;
    for (const auto& p : grid_points(box, samples)) {
        ++scan.samples;
        try {
            if (!eval_dual(e, p, tie_tol).branch_stable) {
                scan.stable = false;
                scan.unstable_points.push_back(p);
            }
        } catch (const domain_error& err) {
            scan.stable = false;
            scan.domain_failures.emplace_back(p, err.what());
        }
    }
    return scan;
}

} // namespace ivexpand
