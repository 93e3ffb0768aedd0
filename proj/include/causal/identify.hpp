#pragma once

#include <set>
#include <string>
#include <vector>

#include "causal/dag.hpp"

namespace causal {

enum class Strategy { Backdoor, Frontdoor, Iv, Mediation };

const char* strategy_name(Strategy s);

struct Estimand {
    Strategy strategy = Strategy::Backdoor;
    std::string treatment;
    std::string outcome;
    std::set<std::string> adjustment;   // backdoor
    std::set<std::string> mediators;    // frontdoor / mediation
    std::set<std::string> instruments;  // iv, deterministic order
    bool direct_edge = false;           // mediation: treatment -> outcome present
    std::string expression;             // human-readable adjustment formula
};

// True iff zs closes every backdoor path from t to o, checked by
// d-separation on the graph with t's outgoing edges removed. zs containing
// t, o or a descendant of t is rejected with an exception.
bool check_backdoor(const Dag& g, const std::string& t, const std::string& o,
                    const std::set<std::string>& zs);

// The three frontdoor conditions for mediator set ws: every directed t->o
// path is intercepted, t->ws is unconfounded, and t closes all backdoor
// paths from ws to o.
bool check_frontdoor(const Dag& g, const std::string& t, const std::string& o,
                     const std::set<std::string>& ws);

// All nodes satisfying the instrumental-variable conditions: an edge into
// the treatment, no directed path to the outcome that avoids the
// treatment, and marginal d-separation from every confounder of (t, o).
// Unobserved nodes are never returned.
std::set<std::string> find_instruments(const Dag& g, const std::string& t, const std::string& o);

struct MediationResult {
    bool direct = false;              // edge t -> o present
    std::set<std::string> mediators;  // interior nodes of directed t->o paths
};

MediationResult identify_mediation(const Dag& g, const std::string& t, const std::string& o);

struct Identification {
    std::vector<Estimand> estimands;  // order: backdoor, iv, frontdoor, mediation
    // Reason per absent strategy, e.g. "iv: No such variable found!".
    std::vector<std::string> absent;
};

// Every applicable estimand for (t, o). The backdoor adjustment set is the
// smallest valid set over observed non-descendants of t, ties broken
// alphabetically. Mediation is included only when a direct edge and a
// mediated path coexist.
Identification identify_effect(const Dag& g, const std::string& t, const std::string& o);

// Plain-text report of an identification, one "### Estimand" block per
// strategy in order, absent strategies included with their reason.
std::string format_identification(const Identification& id);

}  // namespace causal
