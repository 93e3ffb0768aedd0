#include "causal/dag.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <stdexcept>
#include <utility>

namespace causal {

namespace {
constexpr long long kEdgeKeyShift = 1 << 20;
long long edge_key(int from, int to) { return static_cast<long long>(from) * kEdgeKeyShift + to; }
}  // namespace

std::string Path::to_string() const {
    std::string out;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) out += (dirs[i - 1] == StepDir::Forward) ? " -> " : " <- ";
        out += nodes[i];
    }
    return out;
}

void Dag::add_node(const std::string& name, const std::string& label) {
    if (name.empty()) throw std::invalid_argument("node name must not be empty");
    auto it = index_.find(name);
    if (it != index_.end()) {
        if (!label.empty()) set_label(name, label);
        return;
    }
    index_[name] = static_cast<int>(names_.size());
    names_.push_back(name);
    labels_.push_back(label);
    observed_.push_back(true);
    children_.emplace_back();
    parents_.emplace_back();
}

void Dag::set_label(const std::string& name, const std::string& label) {
    const int i = index_of(name);
    if (!labels_[i].empty() && !label.empty() && labels_[i] != label) {
        throw std::invalid_argument("conflicting label for node " + name + ": \"" + labels_[i] +
                                    "\" vs \"" + label + "\"");
    }
    if (!label.empty()) labels_[i] = label;
}

void Dag::set_unobserved(const std::string& name, bool unobserved) {
    observed_[index_of(name)] = !unobserved;
}

void Dag::add_edge(const std::string& from, const std::string& to, std::optional<double> weight) {
    if (from == to) throw std::invalid_argument("self loop on node " + from);
    add_node(from);
    add_node(to);
    const int f = index_of(from);
    const int t = index_of(to);
    if (has_edge(from, to)) throw std::invalid_argument("duplicate edge " + from + " -> " + to);
    if (reachable(t, f)) throw std::invalid_argument("cycle detected: edge " + from + " -> " + to +
                                                     " closes a directed cycle");
    children_[f].push_back(t);
    parents_[t].push_back(f);
    std::sort(children_[f].begin(), children_[f].end());
    std::sort(parents_[t].begin(), parents_[t].end());
    if (weight) weights_[edge_key(f, t)] = *weight;
}

Dag Dag::from_edges(const std::vector<std::string>& nodes,
                    const std::vector<std::pair<int, int>>& edges) {
    Dag g;
    for (const auto& n : nodes) g.add_node(n);
    for (const auto& [f, t] : edges) {
        if (f == t) throw std::invalid_argument("self loop");
        g.children_[f].push_back(t);
        g.parents_[t].push_back(f);
    }
    for (auto& v : g.children_) std::sort(v.begin(), v.end());
    for (auto& v : g.parents_) std::sort(v.begin(), v.end());
    g.topological_order();  // throws on cycle
    return g;
}

size_t Dag::edge_count() const {
    size_t n = 0;
    for (const auto& c : children_) n += c.size();
    return n;
}

bool Dag::has_edge(const std::string& from, const std::string& to) const {
    if (!has_node(from) || !has_node(to)) return false;
    const auto& c = children_[index_.at(from)];
    return std::binary_search(c.begin(), c.end(), index_.at(to));
}

std::optional<double> Dag::edge_weight(const std::string& from, const std::string& to) const {
    if (!has_edge(from, to)) return std::nullopt;
    auto it = weights_.find(edge_key(index_.at(from), index_.at(to)));
    if (it == weights_.end()) return std::nullopt;
    return it->second;
}

const std::string& Dag::label(const std::string& name) const { return labels_[index_of(name)]; }

bool Dag::is_observed(const std::string& name) const { return observed_[index_of(name)]; }

int Dag::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("unknown node: " + name);
    return it->second;
}

std::vector<std::string> Dag::parents_of(const std::string& name) const {
    std::vector<std::string> out;
    for (int p : parents_[index_of(name)]) out.push_back(names_[p]);
    return out;
}

std::vector<std::string> Dag::children_of(const std::string& name) const {
    std::vector<std::string> out;
    for (int c : children_[index_of(name)]) out.push_back(names_[c]);
    return out;
}

bool Dag::reachable(int from, int to) const {
    if (from == to) return true;
    std::vector<bool> seen(names_.size(), false);
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : children_[u]) {
            if (v == to) return true;
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return false;
}

std::set<std::string> Dag::descendants_of(const std::string& name) const {
    std::set<std::string> out;
    std::vector<int> stack{index_of(name)};
    std::vector<bool> seen(names_.size(), false);
    seen[stack[0]] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : children_[u]) {
            if (!seen[v]) {
                seen[v] = true;
                out.insert(names_[v]);
                stack.push_back(v);
            }
        }
    }
    return out;
}

std::set<std::string> Dag::ancestors_of(const std::string& name) const {
    std::set<std::string> out;
    std::vector<int> stack{index_of(name)};
    std::vector<bool> seen(names_.size(), false);
    seen[stack[0]] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : parents_[u]) {
            if (!seen[v]) {
                seen[v] = true;
                out.insert(names_[v]);
                stack.push_back(v);
            }
        }
    }
    return out;
}

std::vector<std::string> Dag::topological_order() const {
    std::vector<int> indeg(names_.size(), 0);
    for (size_t i = 0; i < names_.size(); ++i) indeg[i] = static_cast<int>(parents_[i].size());
    std::deque<int> q;
    for (size_t i = 0; i < names_.size(); ++i) {
        if (indeg[i] == 0) q.push_back(static_cast<int>(i));
    }
    std::vector<std::string> order;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        order.push_back(names_[u]);
        for (int v : children_[u]) {
            if (--indeg[v] == 0) q.push_back(v);
        }
    }
    if (order.size() != names_.size()) throw std::invalid_argument("graph contains a directed cycle");
    return order;
}

Dag Dag::without_outgoing(const std::string& name) const {
    Dag g;
    const int cut = index_of(name);
    for (size_t i = 0; i < names_.size(); ++i) {
        g.add_node(names_[i], labels_[i]);
        g.observed_[i] = observed_[i];
    }
    for (size_t f = 0; f < names_.size(); ++f) {
        if (static_cast<int>(f) == cut) continue;
        for (int t : children_[f]) {
            auto it = weights_.find(edge_key(static_cast<int>(f), t));
            g.add_edge(names_[f], names_[t],
                       it == weights_.end() ? std::nullopt : std::optional<double>(it->second));
        }
    }
    return g;
}

bool Dag::operator==(const Dag& other) const {
    if (names_.size() != other.names_.size()) return false;
    std::vector<std::string> a = names_;
    std::vector<std::string> b = other.names_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return false;
    for (const auto& n : a) {
        if (label(n) != other.label(n)) return false;
        if (is_observed(n) != other.is_observed(n)) return false;
    }
    for (const auto& f : a) {
        for (const auto& t : a) {
            if (has_edge(f, t) != other.has_edge(f, t)) return false;
            if (has_edge(f, t) && edge_weight(f, t) != other.edge_weight(f, t)) return false;
        }
    }
    return true;
}

namespace {

void collect_paths(const Dag& g, int current, int target, std::vector<bool>& visited,
                   Path& partial, std::vector<Path>& out) {
    if (current == target) {
        out.push_back(partial);
        return;
    }
    // Neighbors in index order: children as Forward steps, parents as
    // Backward steps, merged so enumeration order is deterministic.
    const auto& ch = g.children(current);
    const auto& pa = g.parents(current);
    size_t ci = 0;
    size_t pi = 0;
    while (ci < ch.size() || pi < pa.size()) {
        int next = -1;
        StepDir dir{};
        if (pi >= pa.size() || (ci < ch.size() && ch[ci] <= pa[pi])) {
            next = ch[ci++];
            dir = StepDir::Forward;
        } else {
            next = pa[pi++];
            dir = StepDir::Backward;
        }
        if (visited[next]) continue;
        visited[next] = true;
        partial.nodes.push_back(g.name_of(next));
        partial.dirs.push_back(dir);
        collect_paths(g, next, target, visited, partial, out);
        partial.nodes.pop_back();
        partial.dirs.pop_back();
        visited[next] = false;
    }
}

}  // namespace

std::vector<Path> all_paths(const Dag& g, const std::string& x, const std::string& y) {
    const int s = g.index_of(x);
    const int t = g.index_of(y);
    if (s == t) throw std::invalid_argument("all_paths requires distinct endpoints");
    std::vector<bool> visited(g.node_count(), false);
    visited[s] = true;
    Path partial;
    partial.nodes.push_back(x);
    std::vector<Path> out;
    collect_paths(g, s, t, visited, partial, out);
    return out;
}

std::vector<Path> backdoor_paths(const Dag& g, const std::string& treatment,
                                 const std::string& outcome) {
    std::vector<Path> out;
    for (auto& p : all_paths(g, treatment, outcome)) {
        if (!p.dirs.empty() && p.dirs.front() == StepDir::Backward) out.push_back(std::move(p));
    }
    return out;
}

bool d_separated(const Dag& g, const std::set<std::string>& xs, const std::set<std::string>& ys,
                 const std::set<std::string>& zs) {
    for (const auto& s : xs) {
        if (ys.count(s)) throw std::invalid_argument("d_separated: xs and ys must be disjoint");
        if (zs.count(s)) throw std::invalid_argument("d_separated: zs must be disjoint from xs");
    }
    for (const auto& s : ys) {
        if (zs.count(s)) throw std::invalid_argument("d_separated: zs must be disjoint from ys");
    }

    const size_t n = g.node_count();
    std::vector<bool> in_z(n, false);
    for (const auto& name : zs) in_z[g.index_of(name)] = true;

    // Nodes that are in Z or have a descendant in Z (collider activation).
    std::vector<bool> anc_z(n, false);
    {
        std::vector<int> stack;
        for (const auto& name : zs) {
            const int i = g.index_of(name);
            if (!anc_z[i]) {
                anc_z[i] = true;
                stack.push_back(i);
            }
        }
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int p : g.parents(u)) {
                if (!anc_z[p]) {
                    anc_z[p] = true;
                    stack.push_back(p);
                }
            }
        }
    }

    std::vector<bool> target(n, false);
    for (const auto& name : ys) target[g.index_of(name)] = true;

    // Reachability over (node, entry direction) states. Entered "up" means
    // we arrived from a child (or start), "down" means from a parent.
    enum { Up = 0, Down = 1 };
    std::vector<std::array<bool, 2>> seen(n, {false, false});
    std::vector<std::pair<int, int>> stack;
    for (const auto& name : xs) stack.push_back({g.index_of(name), Up});

    while (!stack.empty()) {
        const auto [v, dir] = stack.back();
        stack.pop_back();
        if (seen[v][dir]) continue;
        seen[v][dir] = true;

        if (dir == Up) {
            if (in_z[v]) continue;
            if (target[v]) return false;
            for (int p : g.parents(v)) stack.push_back({p, Up});
            for (int c : g.children(v)) stack.push_back({c, Down});
        } else {
            if (!in_z[v]) {
                if (target[v]) return false;
                for (int c : g.children(v)) stack.push_back({c, Down});
            }
            if (anc_z[v]) {
                for (int p : g.parents(v)) stack.push_back({p, Up});
            }
        }
    }
    return true;
}

bool d_separated(const Dag& g, const std::string& x, const std::string& y,
                 const std::set<std::string>& zs) {
    return d_separated(g, std::set<std::string>{x}, std::set<std::string>{y}, zs);
}

bool d_separated_by_paths(const Dag& g, const std::string& x, const std::string& y,
                          const std::set<std::string>& zs) {
    if (zs.count(x) || zs.count(y)) {
        throw std::invalid_argument("d_separated_by_paths: zs must exclude the endpoints");
    }
    for (const Path& p : all_paths(g, x, y)) {
        bool blocked = false;
        for (size_t i = 1; i + 1 < p.nodes.size(); ++i) {
            const bool collider =
                p.dirs[i - 1] == StepDir::Forward && p.dirs[i] == StepDir::Backward;
            const std::string& v = p.nodes[i];
            if (collider) {
                bool activated = zs.count(v) > 0;
                if (!activated) {
                    for (const auto& d : g.descendants_of(v)) {
                        if (zs.count(d)) {
                            activated = true;
                            break;
                        }
                    }
                }
                if (!activated) {
                    blocked = true;
                    break;
                }
            } else if (zs.count(v)) {
                blocked = true;
                break;
            }
        }
        if (!blocked) return false;
    }
    return true;
}

}  // namespace causal
