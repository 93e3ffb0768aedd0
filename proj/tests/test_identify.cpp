#include <doctest.h>

#include <stdexcept>

#include <algorithm>

#include "causal/identify.hpp"
#include "causal/rng.hpp"

using namespace causal;

namespace {

// Z -> X, Z -> Y, X -> W, W -> Y.
Dag fig_confounder_mediator() {
    Dag g;
    g.add_edge("Z", "X");
    g.add_edge("Z", "Y");
    g.add_edge("X", "W");
    g.add_edge("W", "Y");
    return g;
}

// W -> X, Z -> X, Z -> Y, X -> Y.
Dag fig_instrument() {
    Dag g;
    g.add_edge("W", "X");
    g.add_edge("Z", "X");
    g.add_edge("Z", "Y");
    g.add_edge("X", "Y");
    return g;
}

// ESd -> EMd -> h, ESd -> h.
Dag tides_graph() {
    Dag g;
    g.add_edge("ESd", "EMd");
    g.add_edge("EMd", "h");
    g.add_edge("ESd", "h");
    return g;
}

}  // namespace

TEST_CASE("check_backdoor on the confounded graph") {
    const Dag g = fig_confounder_mediator();
    CHECK(check_backdoor(g, "X", "Y", {"Z"}));
    CHECK_FALSE(check_backdoor(g, "X", "Y", {}));

    Dag chain;
    chain.add_edge("A", "B");
    chain.add_edge("B", "C");
    CHECK(check_backdoor(chain, "A", "C", {}));

    // Descendant of the treatment is rejected, not just false.
    CHECK_THROWS(check_backdoor(g, "X", "Y", {"W"}));
    CHECK_THROWS(check_backdoor(g, "X", "X", {}));
}

TEST_CASE("check_frontdoor conditions") {
    const Dag g = fig_confounder_mediator();
    CHECK(check_frontdoor(g, "X", "Y", {"W"}));

    // Direct edge cannot be intercepted.
    Dag direct;
    direct.add_edge("X", "Y");
    direct.add_edge("X", "W");
    direct.add_edge("W", "Y");
    CHECK_FALSE(check_frontdoor(direct, "X", "Y", {"W"}));
    CHECK_FALSE(check_frontdoor(direct, "X", "Y", {}));

    Dag chain;
    chain.add_edge("A", "B");
    chain.add_edge("B", "C");
    CHECK(check_frontdoor(chain, "A", "C", {"B"}));

    // A confounded mediator fails condition 2.
    Dag conf_med;
    conf_med.add_edge("X", "W");
    conf_med.add_edge("W", "Y");
    conf_med.add_edge("U", "X");
    conf_med.add_edge("U", "W");
    CHECK_FALSE(check_frontdoor(conf_med, "X", "Y", {"W"}));
}

TEST_CASE("find_instruments applies the three conditions") {
    CHECK(find_instruments(fig_instrument(), "X", "Y") == std::set<std::string>{"W"});
    CHECK(find_instruments(fig_confounder_mediator(), "X", "Y").empty());
    // ESd confounds EMd -> h, so it is not an instrument.
    CHECK(find_instruments(tides_graph(), "EMd", "h").empty());
}

TEST_CASE("identify_mediation splits direct and mediated paths") {
    Dag both;
    both.add_edge("X", "Y");
    both.add_edge("X", "W");
    both.add_edge("W", "Y");
    const MediationResult r = identify_mediation(both, "X", "Y");
    CHECK(r.direct);
    CHECK(r.mediators == std::set<std::string>{"W"});

    Dag chain;
    chain.add_edge("A", "B");
    chain.add_edge("B", "C");
    const MediationResult rc = identify_mediation(chain, "A", "C");
    CHECK_FALSE(rc.direct);
    CHECK(rc.mediators == std::set<std::string>{"B"});

    Dag edge;
    edge.add_edge("A", "B");
    const MediationResult re = identify_mediation(edge, "A", "B");
    CHECK(re.direct);
    CHECK(re.mediators.empty());
}

TEST_CASE("identify_effect on the tides graph") {
    const Identification id = identify_effect(tides_graph(), "EMd", "h");
    REQUIRE_FALSE(id.estimands.empty());
    CHECK(id.estimands.front().strategy == Strategy::Backdoor);
    CHECK(id.estimands.front().adjustment == std::set<std::string>{"ESd"});
    // No iv, no frontdoor.
    for (const auto& e : id.estimands) {
        CHECK(e.strategy != Strategy::Iv);
        CHECK(e.strategy != Strategy::Frontdoor);
    }
    const std::string report = format_identification(id);
    CHECK(report.find("Estimand name: backdoor") != std::string::npos);
    CHECK(report.find("Estimand name: iv\nNo such variable found!") != std::string::npos);
    CHECK(report.find("Estimand name: frontdoor\nNo such variable found!") != std::string::npos);
}

TEST_CASE("identify_effect returns an empty backdoor set for a chain") {
    Dag chain;
    chain.add_edge("A", "B");
    chain.add_edge("B", "C");
    const Identification id = identify_effect(chain, "A", "C");
    REQUIRE_FALSE(id.estimands.empty());
    CHECK(id.estimands.front().strategy == Strategy::Backdoor);
    CHECK(id.estimands.front().adjustment.empty());
}

TEST_CASE("identify_effect reaches the iv branch when the confounder is unobserved") {
    Dag g = fig_instrument();
    g.set_unobserved("Z");
    const Identification id = identify_effect(g, "X", "Y");
    REQUIRE_FALSE(id.estimands.empty());
    CHECK(id.estimands.front().strategy == Strategy::Iv);
    CHECK(id.estimands.front().instruments == std::set<std::string>{"W"});
    bool has_backdoor = false;
    for (const auto& e : id.estimands) has_backdoor |= e.strategy == Strategy::Backdoor;
    CHECK_FALSE(has_backdoor);
}

TEST_CASE("identify_effect rejects bad arguments") {
    const Dag g = tides_graph();
    CHECK_THROWS(identify_effect(g, "EMd", "EMd"));
    CHECK_THROWS(identify_effect(g, "nope", "h"));
}

TEST_CASE("returned backdoor sets pass check_backdoor and are minimal") {
    Rng rng(60606);
    int with_backdoor = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));  // up to 8 nodes
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.uniform() < 0.4) edges.push_back({i, j});
            }
        }
        const Dag g = Dag::from_edges(names, edges);
        const std::string t = names[0];
        const std::string o = names[n - 1];

        Identification id;
        try {
            id = identify_effect(g, t, o);
        } catch (const std::invalid_argument&) {
            continue;
        }
        for (const auto& e : id.estimands) {
            if (e.strategy != Strategy::Backdoor) continue;
            ++with_backdoor;
            CHECK(check_backdoor(g, t, o, e.adjustment));
            // Minimality: every strict subset fails.
            std::vector<std::string> zs(e.adjustment.begin(), e.adjustment.end());
            for (size_t drop = 0; drop < zs.size(); ++drop) {
                std::set<std::string> smaller(e.adjustment);
                smaller.erase(zs[drop]);
                CHECK_FALSE(check_backdoor(g, t, o, smaller));
            }
        }
    }
    CHECK(with_backdoor > 50);  // the sweep actually exercised the property
}

TEST_CASE("identify_effect is invariant under node relabeling") {
    const Dag g = fig_instrument();
    const Identification id = identify_effect(g, "X", "Y");

    // Same topology, names permuted.
    Dag h;
    h.add_edge("instr", "t");
    h.add_edge("conf", "t");
    h.add_edge("conf", "o");
    h.add_edge("t", "o");
    const Identification idh = identify_effect(h, "t", "o");

    REQUIRE(id.estimands.size() == idh.estimands.size());
    for (size_t i = 0; i < id.estimands.size(); ++i) {
        CHECK(id.estimands[i].strategy == idh.estimands[i].strategy);
        CHECK(id.estimands[i].adjustment.size() == idh.estimands[i].adjustment.size());
        CHECK(id.estimands[i].instruments.size() == idh.estimands[i].instruments.size());
        CHECK(id.estimands[i].mediators.size() == idh.estimands[i].mediators.size());
    }
}

TEST_CASE("no-confounding graphs get an empty-adjustment backdoor estimand") {
    Dag g;
    g.add_edge("X", "Y");
    g.add_edge("X", "W");
    g.add_edge("W", "Y");
    const Identification id = identify_effect(g, "X", "Y");
    REQUIRE_FALSE(id.estimands.empty());
    CHECK(id.estimands.front().strategy == Strategy::Backdoor);
    CHECK(id.estimands.front().adjustment.empty());
    // Mediation is also applicable here (direct edge + mediated path).
    bool has_mediation = false;
    for (const auto& e : id.estimands) {
        if (e.strategy == Strategy::Mediation) {
            has_mediation = true;
            CHECK(e.mediators == std::set<std::string>{"W"});
        }
    }
    CHECK(has_mediation);
}
