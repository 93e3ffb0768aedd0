#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace causal {

// Direction of one edge along a path, read from the path's walking order:
// Forward means the edge points the way we are walking, Backward means it
// points against us (an arrowhead into the earlier node).
enum class StepDir { Forward, Backward };

struct Path {
    std::vector<std::string> nodes;  // size k+1
    std::vector<StepDir> dirs;       // size k

    // "X <- Z -> Y" rendering.
    std::string to_string() const;
};

// Directed acyclic graph over named variables. Nodes keep insertion order,
// edges may carry a weight and nodes may carry a display label. Mutations
// validate the DAG invariants (no cycles, no self loops, no duplicate
// edges); queries never mutate, so const graphs are safe to share across
// threads.
class Dag {
public:
    Dag() = default;

    void add_node(const std::string& name, const std::string& label = "");
    // Unknown endpoints are declared implicitly, in mention order.
    void add_edge(const std::string& from, const std::string& to,
                  std::optional<double> weight = std::nullopt);
    void set_label(const std::string& name, const std::string& label);
    // Marks a variable as unobservable; identification will refuse to put
    // it in an adjustment set.
    void set_unobserved(const std::string& name, bool unobserved = true);

    // Bulk constructor used by exhaustive graph sweeps; validates acyclicity
    // once instead of per edge.
    static Dag from_edges(const std::vector<std::string>& nodes,
                          const std::vector<std::pair<int, int>>& edges);

    size_t node_count() const { return names_.size(); }
    size_t edge_count() const;
    bool has_node(const std::string& name) const { return index_.count(name) > 0; }
    bool has_edge(const std::string& from, const std::string& to) const;
    std::optional<double> edge_weight(const std::string& from, const std::string& to) const;
    const std::vector<std::string>& nodes() const { return names_; }
    const std::string& label(const std::string& name) const;
    bool is_observed(const std::string& name) const;

    int index_of(const std::string& name) const;  // throws on unknown node
    const std::string& name_of(int idx) const { return names_.at(idx); }
    const std::vector<int>& parents(int idx) const { return parents_.at(idx); }
    const std::vector<int>& children(int idx) const { return children_.at(idx); }

    std::vector<std::string> parents_of(const std::string& name) const;
    std::vector<std::string> children_of(const std::string& name) const;
    std::set<std::string> ancestors_of(const std::string& name) const;    // proper
    std::set<std::string> descendants_of(const std::string& name) const;  // proper
    std::vector<std::string> topological_order() const;

    // Copy without the outgoing edges of `name` (backdoor surgery).
    Dag without_outgoing(const std::string& name) const;

    // Structural equality: same node set, labels, edges and weights;
    // insertion order is ignored.
    bool operator==(const Dag& other) const;

private:
    bool reachable(int from, int to) const;

    std::vector<std::string> names_;
    std::vector<std::string> labels_;
    std::vector<bool> observed_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<int>> children_;
    std::vector<std::vector<int>> parents_;
    std::unordered_map<long long, double> weights_;  // key: from * 2^20 + to
};

// Every simple path between x and y ignoring edge orientation, each step
// annotated with the direction of its edge. Deterministic order (neighbor
// index order, lexicographic by walk).
std::vector<Path> all_paths(const Dag& g, const std::string& x, const std::string& y);

// The subset of all_paths(g, treatment, outcome) whose first edge points
// into the treatment.
std::vector<Path> backdoor_paths(const Dag& g, const std::string& treatment,
                                 const std::string& outcome);

// d-separation of xs from ys given zs, via the standard reachability
// formulation (chain/fork blocked when the middle node is conditioned on,
// collider blocked unless the collider or one of its descendants is).
bool d_separated(const Dag& g, const std::set<std::string>& xs,
                 const std::set<std::string>& ys, const std::set<std::string>& zs);

bool d_separated(const Dag& g, const std::string& x, const std::string& y,
                 const std::set<std::string>& zs);

// Path-enumeration variant of the same predicate. Exponential in graph
// size; kept as an independent cross-check of d_separated on small graphs.
bool d_separated_by_paths(const Dag& g, const std::string& x, const std::string& y,
                          const std::set<std::string>& zs);

}  // namespace causal
