#include "causal/identify.hpp"

#include <algorithm>
#include <stdexcept>

namespace causal {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Backdoor: return "backdoor";
        case Strategy::Frontdoor: return "frontdoor";
        case Strategy::Iv: return "iv";
        case Strategy::Mediation: return "mediation";
    }
    return "?";
}

namespace {

std::string join(const std::set<std::string>& s, const char* sep = ", ") {
    std::string out;
    for (const auto& v : s) {
        if (!out.empty()) out += sep;
        out += v;
    }
    return out;
}

// Directed reachability t -> o avoiding every node in `blocked`.
bool directed_path_avoiding(const Dag& g, const std::string& t, const std::string& o,
                            const std::set<std::string>& blocked) {
    if (blocked.count(t) || blocked.count(o)) return false;
    std::vector<bool> seen(g.node_count(), false);
    std::vector<int> stack{g.index_of(t)};
    seen[stack[0]] = true;
    const int target = g.index_of(o);
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : g.children(u)) {
            if (v == target) return true;
            if (!seen[v] && !blocked.count(g.name_of(v))) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return false;
}

}  // namespace

bool check_backdoor(const Dag& g, const std::string& t, const std::string& o,
                    const std::set<std::string>& zs) {
    if (t == o) throw std::invalid_argument("check_backdoor: treatment equals outcome");
    if (zs.count(t) || zs.count(o)) {
        throw std::invalid_argument("check_backdoor: adjustment set must exclude treatment and outcome");
    }
    const std::set<std::string> desc = g.descendants_of(t);
    for (const auto& z : zs) {
        if (desc.count(z)) {
            throw std::invalid_argument("check_backdoor: " + z + " is a descendant of the treatment");
        }
    }
    // With t's outgoing edges removed, every remaining t~o path starts with
    // an arrow into t, i.e. is a backdoor path.
    const Dag cut = g.without_outgoing(t);
    return d_separated(cut, t, o, zs);
}

bool check_frontdoor(const Dag& g, const std::string& t, const std::string& o,
                     const std::set<std::string>& ws) {
    if (t == o) throw std::invalid_argument("check_frontdoor: treatment equals outcome");
    if (ws.count(t) || ws.count(o)) return false;
    if (ws.empty()) {
        // No mediators can only work when no directed path exists at all,
        // in which case the frontdoor estimand is vacuous; reject.
        return false;
    }

    // (1) ws intercepts every directed t -> o path.
    if (directed_path_avoiding(g, t, o, ws)) return false;

    // (2) no unblocked backdoor path from t to any w.
    const Dag cut_t = g.without_outgoing(t);
    for (const auto& w : ws) {
        if (!d_separated(cut_t, t, w, {})) return false;
    }

    // (3) t blocks every backdoor path from each w to o.
    for (const auto& w : ws) {
        const Dag cut_w = g.without_outgoing(w);
        std::set<std::string> cond{t};
        for (const auto& other : ws) {
            if (other != w) cond.insert(other);
        }
        cond.erase(w);
        cond.erase(o);
        if (!d_separated(cut_w, w, o, cond)) return false;
    }
    return true;
}

namespace {

// Common causes of t and o: ancestors of t that also reach o through a
// directed path that does not pass through t.
std::set<std::string> confounders(const Dag& g, const std::string& t, const std::string& o) {
    std::set<std::string> out;
    for (const auto& c : g.ancestors_of(t)) {
        if (c == o) continue;
        if (directed_path_avoiding(g, c, o, {t})) out.insert(c);
    }
    return out;
}

}  // namespace

std::set<std::string> find_instruments(const Dag& g, const std::string& t, const std::string& o) {
    if (t == o) throw std::invalid_argument("find_instruments: treatment equals outcome");
    const std::set<std::string> conf = confounders(g, t, o);
    std::set<std::string> out;
    for (const auto& z : g.nodes()) {
        if (z == t || z == o) continue;
        if (!g.is_observed(z)) continue;
        // Direct relation with the treatment.
        if (!g.has_edge(z, t)) continue;
        // No effect on the outcome except through the treatment.
        if (directed_path_avoiding(g, z, o, {t})) continue;
        // Independent of every confounder of treatment and outcome.
        bool ok = true;
        for (const auto& c : conf) {
            if (c == z || !d_separated(g, z, c, {})) {
                ok = false;
                break;
            }
        }
        if (ok) out.insert(z);
    }
    return out;
}

MediationResult identify_mediation(const Dag& g, const std::string& t, const std::string& o) {
    if (t == o) throw std::invalid_argument("identify_mediation: treatment equals outcome");
    MediationResult out;
    out.direct = g.has_edge(t, o);
    const std::set<std::string> desc = g.descendants_of(t);
    for (const auto& v : desc) {
        if (v == o) continue;
        if (directed_path_avoiding(g, v, o, {t})) out.mediators.insert(v);
    }
    return out;
}

namespace {

// Smallest adjustment set over the candidate pool passing check_backdoor;
// ties broken by lexicographic order of the sorted name tuple.
bool minimal_backdoor_set(const Dag& g, const std::string& t, const std::string& o,
                          std::set<std::string>& out) {
    std::vector<std::string> pool;
    const std::set<std::string> desc = g.descendants_of(t);
    for (const auto& v : g.nodes()) {
        if (v == t || v == o || desc.count(v) || !g.is_observed(v)) continue;
        pool.push_back(v);
    }
    std::sort(pool.begin(), pool.end());

    for (size_t k = 0; k <= pool.size(); ++k) {
        // Size-k subsets in lexicographic order; the first hit is minimal
        // with the alphabetical tie-break.
        std::vector<size_t> idx(k);
        for (size_t i = 0; i < k; ++i) idx[i] = i;
        bool more = true;
        while (more) {
            std::set<std::string> zs;
            for (size_t i : idx) zs.insert(pool[i]);
            if (check_backdoor(g, t, o, zs)) {
                out = zs;
                return true;
            }
            more = false;
            for (size_t i = k; i-- > 0;) {
                if (idx[i] + (k - i) < pool.size()) {
                    ++idx[i];
                    for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                    more = true;
                    break;
                }
            }
        }
    }
    return false;
}

std::string backdoor_expression(const Estimand& e) {
    if (e.adjustment.empty()) return "d/d[" + e.treatment + "] E[" + e.outcome + "]";
    return "d/d[" + e.treatment + "] E[" + e.outcome + " | " + join(e.adjustment) + "]";
}

}  // namespace

Identification identify_effect(const Dag& g, const std::string& t, const std::string& o) {
    if (t == o) throw std::invalid_argument("identify_effect: treatment equals outcome");
    g.index_of(t);
    g.index_of(o);

    Identification id;

    // Backdoor with the minimal valid observed adjustment set.
    std::set<std::string> zs;
    if (minimal_backdoor_set(g, t, o, zs)) {
        Estimand e;
        e.strategy = Strategy::Backdoor;
        e.treatment = t;
        e.outcome = o;
        e.adjustment = zs;
        e.expression = backdoor_expression(e);
        id.estimands.push_back(std::move(e));
    } else {
        id.absent.push_back("backdoor: no observed set blocks all backdoor paths");
    }

    // Instrumental variables.
    const std::set<std::string> instruments = find_instruments(g, t, o);
    if (!instruments.empty()) {
        Estimand e;
        e.strategy = Strategy::Iv;
        e.treatment = t;
        e.outcome = o;
        e.instruments = instruments;
        e.expression = "E[d" + o + "/d" + *instruments.begin() + "] / E[d" + t + "/d" +
                       *instruments.begin() + "]";
        id.estimands.push_back(std::move(e));
    } else {
        id.absent.push_back("iv: No such variable found!");
    }

    // Frontdoor through the mediators of every directed path.
    const MediationResult med = identify_mediation(g, t, o);
    std::set<std::string> observed_mediators;
    for (const auto& m : med.mediators) {
        if (g.is_observed(m)) observed_mediators.insert(m);
    }
    if (!observed_mediators.empty() && check_frontdoor(g, t, o, observed_mediators)) {
        Estimand e;
        e.strategy = Strategy::Frontdoor;
        e.treatment = t;
        e.outcome = o;
        e.mediators = observed_mediators;
        e.expression = "sum over {" + join(e.mediators) + "}: d[w]/d[" + t + "] * d[" + o + "]/d[w]";
        id.estimands.push_back(std::move(e));
    } else {
        id.absent.push_back("frontdoor: No such variable found!");
    }

    // Mediation decomposition, applicable when a direct edge and a mediated
    // path coexist.
    if (med.direct && !observed_mediators.empty()) {
        Estimand e;
        e.strategy = Strategy::Mediation;
        e.treatment = t;
        e.outcome = o;
        e.mediators = observed_mediators;
        e.direct_edge = true;
        e.expression = "direct: d/d[" + t + "] E[" + o + " | " + join(e.mediators) +
                       "]; indirect: total - direct";
        id.estimands.push_back(std::move(e));
    } else {
        id.absent.push_back("mediation: not applicable (needs a direct edge and a mediated path)");
    }

    return id;
}

std::string format_identification(const Identification& id) {
    // Render in the fixed strategy order, pulling from estimands or the
    // absence notes as appropriate.
    const Strategy order[] = {Strategy::Backdoor, Strategy::Iv, Strategy::Frontdoor,
                              Strategy::Mediation};
    std::string out = "Estimand type: ate\n\n";
    int block = 1;
    for (Strategy s : order) {
        out += "### Estimand : " + std::to_string(block++) + "\n";
        out += std::string("Estimand name: ") + strategy_name(s) + "\n";
        const Estimand* found = nullptr;
        for (const auto& e : id.estimands) {
            if (e.strategy == s) {
                found = &e;
                break;
            }
        }
        if (!found) {
            std::string reason = "No such variable found!";
            for (const auto& a : id.absent) {
                const std::string prefix = std::string(strategy_name(s)) + ":";
                if (a.rfind(prefix, 0) == 0) {
                    reason = a.substr(prefix.size() + 1);
                    break;
                }
            }
            out += reason + "\n\n";
            continue;
        }
        out += "Estimand expression:\n  " + found->expression + "\n";
        switch (s) {
            case Strategy::Backdoor:
                out += "Estimand assumption, Unconfoundedness: if U->" + found->treatment +
                       " and U->" + found->outcome + " then P(" + found->outcome + "|" +
                       found->treatment +
                       (found->adjustment.empty() ? "" : "," + join(found->adjustment)) +
                       ",U) = P(" + found->outcome + "|" + found->treatment +
                       (found->adjustment.empty() ? "" : "," + join(found->adjustment)) + ")\n";
                break;
            case Strategy::Iv:
                out += "Instruments: {" + join(found->instruments) + "}\n";
                break;
            case Strategy::Frontdoor:
            case Strategy::Mediation:
                out += "Mediators: {" + join(found->mediators) + "}\n";
                break;
        }
        out += "\n";
    }
    return out;
}

}  // namespace causal
