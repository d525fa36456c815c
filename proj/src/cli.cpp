#include "ivexpand/cli.hpp"

#include "ivexpand/calculus.hpp"
#include "ivexpand/errors.hpp"
#include "ivexpand/expansion.hpp"
#include "ivexpand/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace ivexpand {

namespace {

// Raised for malformed flag values; the message names the flag.
class flag_error : public invalid_argument {
public:
    using invalid_argument::invalid_argument;
};

struct CommandSpec {
    std::string subcommand;
    std::string expr_text;
    std::size_t arity = 0;  // 0: inferred from the expression
    std::string at;
    std::size_t wrt = 0;
    std::string box;
    std::string about;
    std::string target;
    unsigned order = 3;
    std::string format = "text";
    std::uint64_t seed = default_seed;
    std::string corpus;
    std::size_t grid = 9;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view text, const std::string& flag) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw flag_error(flag + ": '" + t + "' is not a finite real number");
    }
    return v;
}

std::vector<double> parse_point(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        out.push_back(parse_real(std::string_view(text).substr(start, comma - start), flag));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

Interval parse_box_entry(const std::string& raw, const std::string& flag) {
    const std::string t = trim(raw);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
        const std::string inner = t.substr(1, t.size() - 2);
        const std::size_t comma = inner.find(',');
        if (comma == std::string::npos || inner.find(',', comma + 1) != std::string::npos) {
            throw flag_error(flag + ": '" + t + "' is not an interval [lo,hi]");
        }
        const double lo = parse_real(std::string_view(inner).substr(0, comma), flag);
        const double hi = parse_real(std::string_view(inner).substr(comma + 1), flag);
        if (lo > hi) {
            throw flag_error(flag + ": interval '" + t + "' has lo > hi");
        }
        return Interval(lo, hi);
    }
    return Interval(parse_real(t, flag));
}

std::vector<Interval> parse_box(const std::string& text, const std::string& flag) {
    std::vector<Interval> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t semi = text.find(';', start);
        out.push_back(parse_box_entry(text.substr(start, semi - start), flag));
        if (semi == std::string::npos) {
            break;
        }
        start = semi + 1;
    }
    return out;
}

std::size_t max_var(const Node& n) {
    std::size_t m = n.kind == NodeKind::var ? n.var : 0;
    for (const auto& c : n.children) {
        m = std::max(m, max_var(*c));
    }
    return m;
}

Expr parse_flag_expr(const std::string& text, std::size_t arity, std::vector<std::string>& warnings,
                     const std::string& flag) {
    try {
        if (arity != 0) {
            return parse(text, arity, &warnings);
        }
        // No arity given: the highest variable index decides.
        std::vector<std::string> scratch;
        const Expr wide = parse(text, 255, &scratch);
        return parse(text, std::max<std::size_t>(1, max_var(wide.root())), &warnings);
    } catch (const parse_error& e) {
        throw flag_error(flag + ": " + e.what());
    } catch (const invalid_argument& e) {
        throw flag_error(flag + ": " + e.what());
    }
}

EvalPoint point_flag(const std::string& text, const std::string& flag, std::size_t arity) {
    std::vector<double> p = parse_point(text, flag);
    if (p.size() != arity) {
        throw flag_error(flag + ": expected " + std::to_string(arity) + " coordinate(s), got " +
                         std::to_string(p.size()));
    }
    return EvalPoint(std::move(p));
}

std::size_t axis_flag(std::size_t wrt, std::size_t arity) {
    if (wrt < 1 || wrt > arity) {
        throw flag_error("--wrt: axis " + std::to_string(wrt) + " is outside 1.." + std::to_string(arity));
    }
    return wrt;
}

std::string fmt6(const Interval& a) {
    return format(a, 6);
}

std::string fmt_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt_point(std::span<const double> x) {
    std::string s = "(";
    for (std::size_t k = 0; k < x.size(); ++k) {
        s += (k ? ", " : "") + fmt_real(x[k]);
    }
    return s + ")";
}

Json point_json(std::span<const double> x) {
    Json a = Json::array();
    for (double v : x) {
        a.push_back(v);
    }
    return a;
}

Json ties_json(const std::vector<TieLocation>& ties) {
    Json a = Json::array();
    for (const auto& t : ties) {
        a.push_back(Json{{"node_id", t.node_id}, {"node", t.node}});
    }
    return a;
}

std::string tie_warning(const std::vector<TieLocation>& ties, std::span<const double> at) {
    std::string w = "branch tie at " + fmt_point(at);
    if (!ties.empty()) {
        w += " in node '" + ties.front().node + "'";
    }
    return w + ": endpoint partials do not exist; derivative computed as a gH quotient limit";
}

Json report_json(const std::vector<Report>& reports) {
    Json list = Json::array();
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    for (const auto& r : reports) {
        list.push_back(to_json(r));
        if (r.all_skipped()) {
            ++skipped;
        } else if (r.passed) {
            ++passed;
        } else {
            ++failed;
        }
    }
    return Json{{"reports", std::move(list)},
                {"summary", Json{{"passed", passed}, {"failed", failed}, {"skipped", skipped}}}};
}

struct Outcome {
    Json input;
    Json result;
    std::string text;
    std::vector<std::string> warnings;
    int code = exit_code::ok;
};

Outcome run_eval(const CommandSpec& s) {
    Outcome o;
    const Expr e = parse_flag_expr(s.expr_text, s.arity, o.warnings, "--expr");
    const EvalPoint p = point_flag(s.at, "--at", e.arity());
    const Interval v = eval_interval(e, p);
    o.input = Json{{"expr", s.expr_text}, {"arity", e.arity()}, {"at", point_json(p.coords())}};
    o.result = to_json(v);
    o.text = fmt6(v) + "\n";
    return o;
}

Outcome run_diff(const CommandSpec& s) {
    Outcome o;
    const Expr e = parse_flag_expr(s.expr_text, s.arity, o.warnings, "--expr");
    const EvalPoint p = point_flag(s.at, "--at", e.arity());
    const std::size_t i = axis_flag(s.wrt == 0 ? 1 : s.wrt, e.arity());
    const PartialResult r = partial_gh(e, i, p);
    if (!r.branch_stable) {
        o.warnings.push_back(tie_warning(r.ties, p.coords()));
    }
    o.input = Json{{"expr", s.expr_text}, {"arity", e.arity()}, {"at", point_json(p.coords())}, {"wrt", i}};
    Json lateral = nullptr;
    if (r.lateral) {
        lateral = Json{{"left", to_json(r.lateral->left)}, {"right", to_json(r.lateral->right)}};
    }
    o.result = Json{{"value", to_json(r.value)},
                    {"method", to_string(r.method)},
                    {"branch_stable", r.branch_stable},
                    {"lateral", std::move(lateral)},
                    {"ties", ties_json(r.ties)}};
    o.text = "d/dx" + std::to_string(i) + " = " + fmt6(r.value) + "  (" + to_string(r.method) + ")\n";
    return o;
}

Outcome run_grad(const CommandSpec& s) {
    Outcome o;
    const Expr e = parse_flag_expr(s.expr_text, s.arity, o.warnings, "--expr");
    const EvalPoint p = point_flag(s.at, "--at", e.arity());
    o.input = Json{{"expr", s.expr_text}, {"arity", e.arity()}, {"at", point_json(p.coords())}};
    Json grad = Json::array();
    Json methods = Json::array();
    bool warned = false;
    for (std::size_t i = 1; i <= e.arity(); ++i) {
        const PartialResult r = partial_gh(e, i, p);
        if (!r.branch_stable && !warned) {
            o.warnings.push_back(tie_warning(r.ties, p.coords()));
            warned = true;
        }
        grad.push_back(to_json(r.value));
        methods.push_back(to_string(r.method));
        o.text += "d/dx" + std::to_string(i) + " = " + fmt6(r.value) + "  (" + to_string(r.method) + ")\n";
    }
    o.result = Json{{"gradient", std::move(grad)}, {"methods", std::move(methods)}};
    return o;
}

Outcome run_hess(const CommandSpec& s) {
    Outcome o;
    const Expr e = parse_flag_expr(s.expr_text, s.arity, o.warnings, "--expr");
    const EvalPoint p = point_flag(s.at, "--at", e.arity());
    if (!eval_dual(e, p).branch_stable) {
        o.warnings.push_back("branch tie at " + fmt_point(p.coords()) +
                             ": Hessian entries computed as gH quotient limits of first partials");
    }
    const IntervalMatrix h = hessian(e, p);
    o.input = Json{{"expr", s.expr_text}, {"arity", e.arity()}, {"at", point_json(p.coords())}};
    o.result = Json{{"hessian", to_json(h)}};
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            o.text += (c ? "  " : "") + fmt6(h(r, c));
        }
        o.text += "\n";
    }
    return o;
}

Outcome run_mono(const CommandSpec& s) {
    Outcome o;
    const Expr e = parse_flag_expr(s.expr_text, s.arity, o.warnings, "--expr");
    const std::vector<Interval> box = parse_box(s.box, "--box");
    if (box.size() != e.arity()) {
        throw flag_error("--box: expected " + std::to_string(e.arity()) + " interval(s), got " +
                         std::to_string(box.size()));
    }
    if (s.grid < 3) {
        throw flag_error("--grid: needs at least 3 points per axis");
    }
    std::vector<std::size_t> axes;
    if (s.wrt != 0) {
        axes.push_back(axis_flag(s.wrt, e.arity()));
    } else {
        for (std::size_t i = 1; i <= e.arity(); ++i) {
            axes.push_back(i);
        }
    }
    Json boxj = Json::array();
    for (const auto& b : box) {
        boxj.push_back(to_json(b));
    }
    o.input = Json{{"expr", s.expr_text}, {"arity", e.arity()}, {"box", std::move(boxj)}, {"grid", s.grid}};
    Json list = Json::array();
    for (std::size_t i : axes) {
        const MonotonicityReport m = mu_classify(e, i, box, s.grid);
        Json splits = Json::array();
        for (const auto& sp : m.split_points) {
            splits.push_back(point_json(sp));
        }
        list.push_back(Json{{"axis", m.axis},
                            {"verdict", to_string(m.verdict)},
                            {"split_points", splits},
                            {"evidence_grid", m.evidence_grid},
                            {"unstable_samples", m.unstable_samples},
                            {"note", m.note}});
        o.text += "x" + std::to_string(i) + ": " + to_string(m.verdict);
        for (const auto& sp : m.split_points) {
            o.text += "  split " + fmt_point(sp);
        }
        if (!m.note.empty()) {
            o.text += "  (" + m.note + ")";
        }
        o.text += "\n";
    }
    o.result = Json{{"axes", std::move(list)}};
    return o;
}

Outcome run_expand(const CommandSpec& s) {
    Outcome o;
    const Expr e = parse_flag_expr(s.expr_text, s.arity, o.warnings, "--expr");
    const EvalPoint a = point_flag(s.about, "--about", e.arity());
    std::optional<EvalPoint> x;
    if (!s.target.empty()) {
        x = point_flag(s.target, "--target", e.arity());
    }
    if (s.order == 0) {
        throw flag_error("--order: must be at least 1");
    }
    if (e.arity() == 1 && s.order > max_series_order) {
        throw flag_error("--order: at most " + std::to_string(max_series_order) + " for one variable");
    }
    if (e.arity() > 1 && s.order > max_tensor_order) {
        throw flag_error("--order: at most " + std::to_string(max_tensor_order) + " for several variables");
    }
    const ExpansionPolynomial poly =
        e.arity() == 1 ? taylor_1d(e, a[0], s.order, x ? std::optional<double>((*x)[0]) : std::nullopt)
                       : taylor_nd(e, a, x, s.order);
    for (const auto& w : poly.warnings) {
        o.warnings.push_back(w);
    }
    if (!poly.hypotheses_verified) {
        o.warnings.push_back("mu-monotonicity hypotheses unverified: formal expansion");
    }
    o.input = Json{{"expr", s.expr_text}, {"arity", e.arity()}, {"about", point_json(a.coords())}, {"order", s.order}};
    if (x) {
        o.input["target"] = point_json(x->coords());
    }
    o.result = to_json(poly);
    for (const auto& t : poly.terms) {
        std::string alpha;
        for (auto c : t.alpha) {
            alpha += (alpha.empty() ? "" : ",") + std::to_string(c);
        }
        o.text += "alpha (" + alpha + "): " + fmt6(t.coeff) + "\n";
    }
    if (x) {
        const Interval approx = eval_polynomial(poly, x->coords());
        const Interval value = eval_interval(e, *x);
        const Interval defect = gh_diff(value, approx);
        const Interval& rem = *poly.remainder;
        const bool included = is_subset_within(defect, rem, 1e-9 * (1.0 + magnitude(rem)));
        o.result["at_target"] = Json{{"value", to_json(value)},
                                     {"partial_sum", to_json(approx)},
                                     {"defect", to_json(defect)},
                                     {"included", included}};
        o.text += "remainder: " + fmt6(rem) + "  (sampling-based, " + std::to_string(poly.remainder_meta.theta_samples) +
                  " theta samples)\n";
        o.text += "f(target) -gH partial sum: " + fmt6(defect) + (included ? "  (inside remainder)\n" : "  (OUTSIDE remainder)\n");
    }
    return o;
}

std::vector<Expr> read_corpus(const std::string& path, std::size_t arity,
                              std::vector<std::string>& warnings) {
    std::ifstream in(path);
    if (!in) {
        throw flag_error("--corpus: cannot open '" + path + "'");
    }
    std::vector<Expr> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        out.push_back(parse_flag_expr(t, arity, warnings, "--corpus line " + std::to_string(lineno)));
    }
    return out;
}

Outcome run_check(const CommandSpec& s, OutputFormat fmt) {
    Outcome o;
    std::vector<Report> reports;
    o.input = Json{{"seed", s.seed}};
    if (!s.corpus.empty()) {
        o.input["corpus"] = s.corpus;
        reports = corpus_suite(read_corpus(s.corpus, s.arity, o.warnings), s.seed);
    } else {
        reports = example_suite();
        reports.push_back(generated_bracket_suite(s.seed));
        reports.push_back(generated_mvt_suite(s.seed));
        reports.push_back(generated_rule_suite(s.seed));
    }
    sort_reports(reports);
    o.result = report_json(reports);
    if (fmt == OutputFormat::text) {
        o.text = render_report(reports, OutputFormat::text);
    }
    const bool failed = std::any_of(reports.begin(), reports.end(),
                                    [](const Report& r) { return !r.passed && !r.all_skipped(); });
    o.code = failed ? exit_code::verification_failure : exit_code::ok;
    return o;
}

void add_common(CLI::App* sub, CommandSpec& s, bool needs_expr) {
    auto* expr = sub->add_option("--expr", s.expr_text, "Interval-valued function, e.g. \"exp([-1,2]*t)\"");
    if (needs_expr) {
        expr->required();
    }
    sub->add_option("--arity", s.arity, "Number of variables (default: highest variable index)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "text"}));
}

} // namespace

std::string render_report(std::vector<Report> reports, OutputFormat format) {
    sort_reports(reports);
    if (format == OutputFormat::json) {
        return dump_json(report_json(reports));
    }
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-44s %-12s %-12s %s\n", "status", "check", "measured", "tolerance",
                  "samples");
    os << line;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    for (const auto& r : reports) {
        const char* status = r.all_skipped() ? "SKIP" : (r.passed ? "PASS" : "FAIL");
        std::string samples = std::to_string(r.samples);
        if (r.skipped > 0) {
            samples += " (" + std::to_string(r.skipped) + " skipped)";
        }
        std::snprintf(line, sizeof line, "%-6s %-44s %-12s %-12s %s\n", status, r.check_id.c_str(),
                      fmt_real(r.measured).c_str(), fmt_real(r.tolerance).c_str(), samples.c_str());
        os << line;
        if (r.all_skipped()) {
            ++skipped;
            if (!r.notes.empty()) {
                os << "       reason: " << r.notes.front() << "\n";
            }
        } else if (r.passed) {
            ++passed;
        } else {
            ++failed;
            if (!r.witnesses.empty()) {
                const Witness& w = r.witnesses.front();
                os << "       worst at " << fmt_point(w.point) << ": expected " << fmt6(w.expected) << ", actual "
                   << fmt6(w.actual) << "\n";
            }
        }
    }
    os << "summary: " << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
    return os.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Calculus of interval-valued functions under gH differentiability"};
    app.name("ivexpand");
    app.require_subcommand(1);
    CommandSpec s;

    auto* eval = app.add_subcommand("eval", "Evaluate f at a point");
    add_common(eval, s, true);
    eval->add_option("--at", s.at, "Point, comma-separated (e.g. 2,2)")->required();

    auto* diff = app.add_subcommand("diff", "gH partial derivative");
    add_common(diff, s, true);
    diff->add_option("--at", s.at, "Point, comma-separated")->required();
    diff->add_option("--wrt", s.wrt, "Variable index (1-based)")->default_val(1);

    auto* grad = app.add_subcommand("grad", "gH gradient");
    add_common(grad, s, true);
    grad->add_option("--at", s.at, "Point, comma-separated")->required();

    auto* hess = app.add_subcommand("hess", "gH Hessian");
    add_common(hess, s, true);
    hess->add_option("--at", s.at, "Point, comma-separated")->required();

    auto* mono = app.add_subcommand("mono", "Classify mu-monotonicity on a box");
    add_common(mono, s, true);
    mono->add_option("--box", s.box, "Box, semicolon-separated intervals (e.g. [0,1];[0,2])")->required();
    mono->add_option("--wrt", s.wrt, "Axis to classify (default: all)");
    mono->add_option("--grid", s.grid, "Grid points per axis")->default_val(9);

    auto* expand = app.add_subcommand("expand", "Expansion about a point with optional remainder");
    add_common(expand, s, true);
    expand->add_option("--about", s.about, "Base point, comma-separated")->required();
    expand->add_option("--target", s.target, "Target point for the remainder enclosure");
    expand->add_option("--order", s.order, "Number of retained derivative orders")->default_val(3);

    auto* check = app.add_subcommand("check", "Run the verification suite");
    check->add_option("--arity", s.arity, "Arity of corpus expressions (default: inferred per line)")
        ->check(CLI::PositiveNumber);
    check->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    check->add_option("--seed", s.seed, "Generator seed")->default_val(default_seed);
    check->add_option("--corpus", s.corpus, "Newline-delimited expression file");

    try {
        std::vector<std::string> args;
        for (int k = argc - 1; k >= 1; --k) {
            args.emplace_back(argv[k]);
        }
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::input_error;
    }
    for (auto* sub : app.get_subcommands()) {
        s.subcommand = sub->get_name();
    }
    const OutputFormat fmt = s.format == "json" ? OutputFormat::json : OutputFormat::text;

    Outcome o;
    try {
        if (s.subcommand == "eval") {
            o = run_eval(s);
        } else if (s.subcommand == "diff") {
            o = run_diff(s);
        } else if (s.subcommand == "grad") {
            o = run_grad(s);
        } else if (s.subcommand == "hess") {
            o = run_hess(s);
        } else if (s.subcommand == "mono") {
            o = run_mono(s);
        } else if (s.subcommand == "expand") {
            o = run_expand(s);
        } else {
            o = run_check(s, fmt);
        }
    } catch (const math_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::math_failure;
    } catch (const domain_error& e) {
        err << "error: domain: " << e.what() << "\n";
        return exit_code::input_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::input_error;
    }

    if (fmt == OutputFormat::json) {
        Json doc;
        doc["command"] = s.subcommand;
        doc["input"] = std::move(o.input);
        doc["result"] = std::move(o.result);
        doc["warnings"] = o.warnings;
        out << dump_json(doc);
    } else {
        out << o.text;
        for (const auto& w : o.warnings) {
            err << "warning: " << w << "\n";
        }
    }
    return o.code;
}

} // namespace ivexpand
