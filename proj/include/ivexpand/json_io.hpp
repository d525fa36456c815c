#pragma once

#include "ivexpand/expansion.hpp"
#include "ivexpand/interval.hpp"
#include "ivexpand/verify.hpp"

#include <json.hpp>

#include <string>

namespace ivexpand {

using Json = nlohmann::ordered_json;

// Serializes with every real printed as %.17g (negative zero as 0,
// non-finite values as null) and two-space indentation. Parsing the output
// and dumping it again reproduces it byte for byte.
std::string dump_json(const Json& j);

Json to_json(const Interval& a);
Json to_json(const IntervalVector& v);
Json to_json(const IntervalMatrix& m);
Json to_json(const ExpansionPolynomial& p);
Json to_json(const Report& r);

// Two-element array [lo, hi]; invalid_argument otherwise.
Interval interval_from_json(const Json& j);

} // namespace ivexpand
