#pragma once

#include "ivexpand/interval.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ivexpand {

enum class NodeKind { interval_lit, real_lit, var, add, sub, mul, int_pow, unary, ghdiff };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Immutable AST node. Children: add/sub/mul/ghdiff have two, int_pow and
// unary have one.
struct Node {
    NodeKind kind;
    Interval literal;       // interval_lit / real_lit (degenerate)
    std::size_t var = 0;    // 1-based, var
    unsigned power = 0;     // int_pow
    UnaryFn fn = UnaryFn::exp;
    std::vector<NodePtr> children;
};

namespace node {
NodePtr interval(const Interval& a);
NodePtr real(double x);
NodePtr var(std::size_t i);
NodePtr add(NodePtr l, NodePtr r);
NodePtr sub(NodePtr l, NodePtr r);
NodePtr mul(NodePtr l, NodePtr r);
NodePtr pow(NodePtr base, unsigned k);
NodePtr unary(UnaryFn f, NodePtr arg);
NodePtr ghdiff(NodePtr l, NodePtr r);
} // namespace node

// Interval-valued function of `arity` real variables.
//
// Every syntactic occurrence of an interval literal is an independent
// interval; "a - b" means a + (-1)*b, and gH-difference is spelled ghdiff(a, b).
class Expr {
public:
    // Throws invalid_argument when a variable index exceeds arity.
    Expr(NodePtr root, std::size_t arity);

    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }
    std::size_t arity() const noexcept { return arity_; }

    // True when the expression contains no interval literal with nonzero
    // spread, i.e. it is a real-valued function.
    bool is_real_valued() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    NodePtr root_;
    std::size_t arity_;
};

// Parses the expression grammar. Interval literals written as [hi, lo] are
// normalized and reported in `warnings` when supplied.
Expr parse(std::string_view text, std::size_t arity, std::vector<std::string>* warnings = nullptr);

// Canonical text; parse(print(e), e.arity()) == e.
std::string print(const Expr& e);
std::string print(const Node& n);

// Replaces x_i by inner[i-1]; the result has arity `inner_arity`.
Expr substitute(const Expr& outer, std::span<const Expr> inner);

// Real coordinates with all entries finite.
class EvalPoint {
public:
    EvalPoint() = default;
    EvalPoint(std::vector<double> coords);
    EvalPoint(std::initializer_list<double> coords) : EvalPoint(std::vector<double>(coords)) {}

    std::size_t size() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_.at(i); }
    std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const EvalPoint&, const EvalPoint&) = default;

private:
    std::vector<double> coords_;
};

// Copy of p with coordinate i (1-based) shifted by h.
EvalPoint perturb(const EvalPoint& p, std::size_t i, double h);

Interval eval_interval(const Expr& e, const EvalPoint& p);

} // namespace ivexpand
