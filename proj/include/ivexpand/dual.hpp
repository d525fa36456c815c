#pragma once

#include "ivexpand/expr.hpp"
#include "ivexpand/jet.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ivexpand {

inline constexpr double default_tie_tol = 1e-12;

// A min/max selection whose competing candidates had (nearly) equal values
// but different local expansions.
struct TieLocation {
    std::size_t node_id;  // preorder index of the node
    std::string node;     // printed subexpression

    friend bool operator==(const TieLocation&, const TieLocation&) = default;
};

// Taylor expansions of the lower and upper endpoint functions with every
// min/max selection frozen at the expansion point.
struct EndpointJets {
    Jet lo;
    Jet hi;
    bool branch_stable = true;
    std::vector<TieLocation> ties;
    // One entry per selection node, in evaluation order: the winning
    // candidate indices. Equal signatures at two points mean the same
    // branch of the piecewise endpoint functions.
    std::vector<std::uint8_t> signature;
};

// `vars[i]` is the jet substituted for x_{i+1}; all must share one layout.
EndpointJets eval_jets(const Expr& e, std::span<const Jet> vars, double tie_tol = default_tie_tol);

// Endpoint jets of degree `degree` in the expression's own variables, seeded at p.
EndpointJets eval_jets_at(const Expr& e, const EvalPoint& p, unsigned degree, double tie_tol = default_tie_tol);

// Endpoint jets of t -> e(a + t v), degree `degree` in t.
EndpointJets eval_jets_along(const Expr& e, const EvalPoint& a, std::span<const double> v, unsigned degree,
                             double tie_tol = default_tie_tol);

struct DualEndpoint {
    double lo_val = 0.0;
    double hi_val = 0.0;
    std::vector<double> lo_grad;
    std::vector<double> hi_grad;
    bool branch_stable = true;
    std::vector<TieLocation> tie_locations;
    std::vector<std::uint8_t> signature;
};

DualEndpoint eval_dual(const Expr& e, const EvalPoint& p, double tie_tol = default_tie_tol);

struct StabilityScan {
    bool stable = true;
    std::size_t samples = 0;
    std::vector<EvalPoint> unstable_points;
    // Points where evaluation raised a domain error, with the message.
    std::vector<std::pair<EvalPoint, std::string>> domain_failures;
};

// eval_dual on a regular grid of `samples` points per axis over `box`.
StabilityScan branch_stability(const Expr& e, std::span<const Interval> box, std::size_t samples,
                               double tie_tol = default_tie_tol);

// Regular grid helper shared by grid scans: `samples` points per axis,
// endpoints included, first axis varying slowest.
std::vector<EvalPoint> grid_points(std::span<const Interval> box, std::size_t samples);

} // namespace ivexpand
