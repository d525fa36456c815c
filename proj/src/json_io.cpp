#include "ivexpand/json_io.hpp"

#include "ivexpand/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ivexpand {

namespace {

void write_real(std::string& out, double x) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    if (x == 0.0) {
        x = 0.0;  // drops the sign of -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

void write(std::string& out, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad + Json(key).dump() + ": ";
            write(out, value, indent + 2);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line ([lo, hi], points, multi-indices).
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
        if (flat) {
            out += "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) {
                    out += ", ";
                }
                write(out, j[k], indent);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) {
                out += ",\n";
            }
            out += pad;
            write(out, j[k], indent + 2);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float:
        write_real(out, j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

Json real(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return x;
}

Json reals(std::span<const double> xs) {
    Json a = Json::array();
    for (double x : xs) {
        a.push_back(real(x));
    }
    return a;
}

} // namespace

std::string dump_json(const Json& j) {
    std::string out;
    write(out, j, 0);
    out += "\n";
    return out;
}

Json to_json(const Interval& a) {
    return Json::array({real(a.lo()), real(a.hi())});
}

Json to_json(const IntervalVector& v) {
    Json a = Json::array();
    for (const auto& x : v) {
        a.push_back(to_json(x));
    }
    return a;
}

Json to_json(const IntervalMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(to_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const ExpansionPolynomial& p) {
    Json j;
    j["base"] = reals(p.base_point);
    j["order"] = p.order;
    Json terms = Json::array();
    for (const auto& t : p.terms) {
        Json alpha = Json::array();
        for (auto c : t.alpha) {
            alpha.push_back(static_cast<unsigned>(c));
        }
        terms.push_back(Json{{"alpha", std::move(alpha)}, {"coeff", to_json(t.coeff)}});
    }
    j["terms"] = std::move(terms);
    j["remainder"] = p.remainder ? to_json(*p.remainder) : Json(nullptr);
    Json meta;
    meta["hypotheses_verified"] = p.hypotheses_verified;
    if (p.remainder) {
        meta["theta_samples"] = p.remainder_meta.theta_samples;
        meta["segment"] = Json::array({reals(p.remainder_meta.segment_from), reals(p.remainder_meta.segment_to)});
        meta["enclosure"] = p.remainder_meta.sampled ? "sampling-based, non-rigorous" : "rigorous";
    }
    j["meta"] = std::move(meta);
    return j;
}

Json to_json(const Report& r) {
    Json j;
    j["check_id"] = r.check_id;
    j["passed"] = r.passed;
    j["measured"] = real(r.measured);
    j["tolerance"] = real(r.tolerance);
    j["samples"] = r.samples;
    Json ws = Json::array();
    for (const auto& w : r.witnesses) {
        ws.push_back(Json{{"point", reals(w.point)}, {"expected", to_json(w.expected)}, {"actual", to_json(w.actual)}});
    }
    j["witnesses"] = std::move(ws);
    j["skipped"] = r.skipped;
    if (r.lhs) {
        j["lhs"] = to_json(*r.lhs);
    }
    if (r.rhs) {
        j["rhs"] = to_json(*r.rhs);
    }
    if (r.margin) {
        j["margin"] = real(*r.margin);
    }
    j["notes"] = r.notes;
    return j;
}

Interval interval_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw invalid_argument("expected an interval as a two-element array [lo, hi]");
    }
    return Interval(j[0].get<double>(), j[1].get<double>());
}

} // namespace ivexpand
