#include "ivexpand/expr.hpp"

#include "ivexpand/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace ivexpand {

namespace node {

namespace {
NodePtr make(NodeKind k, std::vector<NodePtr> children = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->children = std::move(children);
    return n;
}
} // namespace

NodePtr interval(const Interval& a) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::interval_lit;
    n->literal = a;
    return n;
}

NodePtr real(double x) {
    if (!std::isfinite(x)) {
        throw invalid_argument("real literal must be finite");
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::real_lit;
    n->literal = Interval(x);
    return n;
}

NodePtr var(std::size_t i) {
    if (i == 0) {
        throw invalid_argument("variable indices start at 1");
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::var;
    n->var = i;
    return n;
}

NodePtr add(NodePtr l, NodePtr r) { return make(NodeKind::add, {std::move(l), std::move(r)}); }
NodePtr sub(NodePtr l, NodePtr r) { return make(NodeKind::sub, {std::move(l), std::move(r)}); }
NodePtr mul(NodePtr l, NodePtr r) { return make(NodeKind::mul, {std::move(l), std::move(r)}); }
NodePtr ghdiff(NodePtr l, NodePtr r) { return make(NodeKind::ghdiff, {std::move(l), std::move(r)}); }

NodePtr pow(NodePtr base, unsigned k) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::int_pow;
    n->power = k;
    n->children = {std::move(base)};
    return n;
}

NodePtr unary(UnaryFn f, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::unary;
    n->fn = f;
    n->children = {std::move(arg)};
    return n;
}

} // namespace node

namespace {

std::size_t max_var(const Node& n) {
    std::size_t m = n.kind == NodeKind::var ? n.var : 0;
    for (const auto& c : n.children) {
        m = std::max(m, max_var(*c));
    }
    return m;
}

bool same(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.children.size() != b.children.size()) {
        return false;
    }
    switch (a.kind) {
    case NodeKind::interval_lit:
    case NodeKind::real_lit:
        if (!(a.literal == b.literal)) {
            return false;
        }
        break;
    case NodeKind::var:
        if (a.var != b.var) {
            return false;
        }
        break;
    case NodeKind::int_pow:
        if (a.power != b.power) {
            return false;
        }
        break;
    case NodeKind::unary:
        if (a.fn != b.fn) {
            return false;
        }
        break;
    default:
        break;
    }
    for (std::size_t k = 0; k < a.children.size(); ++k) {
        if (!same(*a.children[k], *b.children[k])) {
            return false;
        }
    }
    return true;
}

bool real_valued(const Node& n) {
    if (n.kind == NodeKind::interval_lit && !n.literal.is_degenerate()) {
        return false;
    }
    for (const auto& c : n.children) {
        if (!real_valued(*c)) {
            return false;
        }
    }
    return true;
}

// Recursive-descent parser following
//   expr   := term (("+"|"-") term)*
//   term   := factor ("*" factor)*
//   factor := base ("^" INT)?
//   base   := NUMBER | "[" NUMBER "," NUMBER "]" | VAR | FUNC "(" expr ")" | "(" expr ")"
class Parser {
public:
    Parser(std::string_view text, std::size_t arity, std::vector<std::string>* warnings)
        : text_(text), arity_(arity), warnings_(warnings) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail(std::string("unexpected '") + text_[pos_] + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
        int line = 1;
        int col = 1;
        for (std::size_t k = 0; k < at && k < text_.size(); ++k) {
            if (text_[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw parse_error(msg, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = node::add(lhs, term());
            } else if (accept('-')) {
                lhs = node::sub(lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (accept('*')) {
            lhs = node::mul(lhs, factor());
        }
        return lhs;
    }

    NodePtr factor() {
        NodePtr b = base();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected a nonnegative integer exponent");
            }
            unsigned k = 0;
            const auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, k);
            if (ec != std::errc()) {
                fail_at("exponent out of range", start);
            }
            return node::pow(b, k);
        }
        return b;
    }

    bool at_number() const {
        std::size_t k = pos_;
        if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) {
            ++k;
        }
        if (k < text_.size() && text_[k] == '.') {
            ++k;
        }
        return k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]));
    }

    double number() {
        skip_ws();
        if (!at_number()) {
            fail("expected a number");
        }
        const std::size_t start = pos_;
        const auto digits = [this] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        };
        if (text_[pos_] == '+' || text_[pos_] == '-') {
            ++pos_;
        }
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) {
                ++k;
            }
            if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
                pos_ = k;
                digits();
            }
        }
        std::size_t first = start;
        if (text_[first] == '+') {
            ++first;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + first, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(v)) {
            fail_at("malformed or out-of-range number", start);
        }
        return v;
    }

    std::size_t var_index() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a variable index after 'x'");
        }
        std::size_t i = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, i);
        if (i == 0 || i > arity_) {
            fail_at("variable x" + std::string(text_.substr(start, pos_ - start)) + " exceeds arity " +
                        std::to_string(arity_),
                    start - 1);
        }
        return i;
    }

    NodePtr base() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        if (at_number()) {
            return node::real(number());
        }
        const char c = text_[pos_];
        if (c == '[') {
            const std::size_t start = pos_;
            ++pos_;
            const double a = number();
            expect(',');
            const double b = number();
            expect(']');
            if (a > b && warnings_ != nullptr) {
                warnings_->push_back("interval literal at column " + std::to_string(start + 1) +
                                     " has lower endpoint above upper; normalized to [" + std::to_string(b) +
                                     ", " + std::to_string(a) + "]");
            }
            return node::interval(bracket(a, b));
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "x") {
                return node::var(var_index());
            }
            if (word == "t") {
                if (arity_ < 1) {
                    fail_at("variable t exceeds arity", start);
                }
                return node::var(1);
            }
            if (word == "exp" || word == "ln" || word == "sqrt") {
                const UnaryFn f = word == "exp" ? UnaryFn::exp : word == "ln" ? UnaryFn::ln : UnaryFn::sqrt;
                expect('(');
                NodePtr arg = expr();
                expect(')');
                return node::unary(f, arg);
            }
            if (word == "ghdiff") {
                expect('(');
                NodePtr l = expr();
                expect(',');
                NodePtr r = expr();
                expect(')');
                return node::ghdiff(l, r);
            }
            fail_at("unknown identifier '" + std::string(word) + "'", start);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    std::size_t arity_;
    std::vector<std::string>* warnings_;
    std::size_t pos_ = 0;
};

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int precedence(const Node& n) {
    switch (n.kind) {
    case NodeKind::add:
    case NodeKind::sub:
        return 1;
    case NodeKind::mul:
        return 2;
    case NodeKind::int_pow:
        return 3;
    default:
        return 4;
    }
}

void print_to(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
    if (precedence(child) < min_prec) {
        out += '(';
        print_to(child, out);
        out += ')';
    } else {
        print_to(child, out);
    }
}

void print_to(const Node& n, std::string& out) {
    switch (n.kind) {
    case NodeKind::interval_lit:
        out += '[' + fmt_real(n.literal.lo()) + ',' + fmt_real(n.literal.hi()) + ']';
        return;
    case NodeKind::real_lit:
        out += fmt_real(n.literal.lo());
        return;
    case NodeKind::var:
        out += 'x' + std::to_string(n.var);
        return;
    case NodeKind::add:
    case NodeKind::sub:
        print_child(*n.children[0], 1, out);
        out += n.kind == NodeKind::add ? " + " : " - ";
        print_child(*n.children[1], 2, out);
        return;
    case NodeKind::mul:
        print_child(*n.children[0], 2, out);
        out += '*';
        print_child(*n.children[1], 3, out);
        return;
    case NodeKind::int_pow:
        print_child(*n.children[0], 4, out);
        out += '^' + std::to_string(n.power);
        return;
    case NodeKind::unary:
        out += to_string(n.fn);
        out += '(';
        print_to(*n.children[0], out);
        out += ')';
        return;
    case NodeKind::ghdiff:
        out += "ghdiff(";
        print_to(*n.children[0], out);
        out += ", ";
        print_to(*n.children[1], out);
        out += ')';
        return;
    }
}

Interval eval_node(const Node& n, const EvalPoint& p) {
    switch (n.kind) {
    case NodeKind::interval_lit:
    case NodeKind::real_lit:
        return n.literal;
    case NodeKind::var:
        return Interval(p[n.var - 1]);
    case NodeKind::add:
        return add(eval_node(*n.children[0], p), eval_node(*n.children[1], p));
    case NodeKind::sub:
        return add(eval_node(*n.children[0], p), scalar_mul(-1.0, eval_node(*n.children[1], p)));
    case NodeKind::mul:
        return mul(eval_node(*n.children[0], p), eval_node(*n.children[1], p));
    case NodeKind::int_pow:
        return int_pow(eval_node(*n.children[0], p), n.power);
    case NodeKind::unary:
        return monotone_unary(n.fn, eval_node(*n.children[0], p));
    case NodeKind::ghdiff:
        return gh_diff(eval_node(*n.children[0], p), eval_node(*n.children[1], p));
    }
    throw invalid_argument("unknown node kind");
}

NodePtr substitute_node(const NodePtr& n, std::span<const Expr> inner) {
    if (n->kind == NodeKind::var) {
        return inner[n->var - 1].root_ptr();
    }
    if (n->children.empty()) {
        return n;
    }
    auto copy = std::make_shared<Node>(*n);
    for (auto& c : copy->children) {
        c = substitute_node(c, inner);
    }
    return copy;
}

} // namespace

Expr::Expr(NodePtr root, std::size_t arity) : root_(std::move(root)), arity_(arity) {
    if (!root_) {
        throw invalid_argument("expression has no root");
    }
    if (arity_ == 0) {
        throw invalid_argument("arity must be at least 1");
    }
    const std::size_t m = max_var(*root_);
    if (m > arity_) {
        throw invalid_argument("variable x" + std::to_string(m) + " exceeds arity " + std::to_string(arity_));
    }
}

bool Expr::is_real_valued() const { return real_valued(*root_); }

bool operator==(const Expr& a, const Expr& b) { return a.arity_ == b.arity_ && same(*a.root_, *b.root_); }

Expr parse(std::string_view text, std::size_t arity, std::vector<std::string>* warnings) {
    if (arity == 0) {
        throw invalid_argument("arity must be at least 1");
    }
    Parser p(text, arity, warnings);
    return Expr(p.run(), arity);
}

std::string print(const Node& n) {
    std::string out;
    print_to(n, out);
    return out;
}

std::string print(const Expr& e) { return print(e.root()); }

Expr substitute(const Expr& outer, std::span<const Expr> inner) {
    if (inner.size() != outer.arity()) {
        throw invalid_argument("substitute: outer arity " + std::to_string(outer.arity()) + " but " +
                               std::to_string(inner.size()) + " inner expressions");
    }
    if (inner.empty()) {
        throw invalid_argument("substitute: no inner expressions");
    }
    const std::size_t m = inner.front().arity();
    for (const auto& in : inner) {
        if (in.arity() != m) {
            throw invalid_argument("substitute: inner expressions disagree on arity");
        }
    }
    return Expr(substitute_node(outer.root_ptr(), inner), m);
}

EvalPoint::EvalPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double c : coords_) {
        if (!std::isfinite(c)) {
            throw invalid_argument("evaluation point has a non-finite coordinate");
        }
    }
}

EvalPoint perturb(const EvalPoint& p, std::size_t i, double h) {
    if (i == 0 || i > p.size()) {
        throw invalid_argument("perturb: axis " + std::to_string(i) + " out of range 1.." + std::to_string(p.size()));
    }
    std::vector<double> c(p.coords().begin(), p.coords().end());
    c[i - 1] += h;
    return EvalPoint(std::move(c));
}

Interval eval_interval(const Expr& e, const EvalPoint& p) {
    if (p.size() != e.arity()) {
        throw invalid_argument("point has " + std::to_string(p.size()) + " coordinates, expression arity is " +
                               std::to_string(e.arity()));
    }
    return eval_node(e.root(), p);
}

} // namespace ivexpand
