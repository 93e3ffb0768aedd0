#pragma once

#include <string>

#include "causal/dag.hpp"

namespace causal {

// Parser for the DOT subset used by the causal models: a single `digraph`
// (optionally named) containing node statements with an optional
// label="..." attribute and -> edge chains, `;`-separated. Edge statements
// accept a numeric label attribute, which is stored as the edge weight.
// Anything else is rejected with a position-annotated error.
Dag parse_dot(const std::string& text);

// Deterministic inverse of parse_dot: nodes in insertion order, then edges.
// parse_dot(serialize_dot(g)) == g.
std::string serialize_dot(const Dag& g);

}  // namespace causal
