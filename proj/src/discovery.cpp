#include "causal/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "causal/stats.hpp"

namespace causal {

CiResult ci_test_partial_correlation(const DataTable& data, const std::string& x,
                                     const std::string& y,
                                     const std::set<std::string>& cond, double alpha) {
    const auto& cx = data.column(x);
    const auto& cy = data.column(y);
    const size_t n = data.row_count();
    if (n <= cond.size() + 3) {
        throw std::invalid_argument("ci_test: need more than |cond|+3 rows");
    }
    std::vector<std::span<const double>> zc;
    for (const auto& name : cond) zc.push_back(data.column(name));

    CiResult out;
    double r = 0.0;
    try {
        if (zc.empty()) {
            r = pearson(cx, cy);
        } else {
            std::vector<std::string> labels(zc.size());
            for (size_t i = 0; i < labels.size(); ++i) labels[i] = "z" + std::to_string(i);
            const OlsFit fx = ols(zc, cx, labels);
            const OlsFit fy = ols(zc, cy, labels);
            // A conditioning set that determines x or y leaves no residual
            // variation to test; the pair is reported untestable.
            const double rx = variance(fx.residuals);
            const double ry = variance(fy.residuals);
            if (rx <= 1e-12 * variance(cx) || ry <= 1e-12 * variance(cy)) {
                out.degenerate = true;
                out.independent = false;
                out.p_value = 0.0;
                return out;
            }
            r = pearson(fx.residuals, fy.residuals);
        }
    } catch (const RankDeficientError&) {
        out.degenerate = true;
        out.independent = false;
        out.p_value = 0.0;
        return out;
    }
    r = std::clamp(r, -0.9999999, 0.9999999);
    out.partial_corr = r;
    const double z = 0.5 * std::log((1.0 + r) / (1.0 - r)) *
                     std::sqrt(static_cast<double>(n) - static_cast<double>(cond.size()) - 3.0);
    out.p_value = two_sided_p(z);
    out.independent = out.p_value >= alpha;
    return out;
}

namespace {

// Subsets of `items` of size k in lexicographic order.
void k_subsets(const std::vector<std::string>& items, size_t k, size_t start,
               std::vector<std::string>& cur, std::vector<std::vector<std::string>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (size_t i = start; i < items.size(); ++i) {
        cur.push_back(items[i]);
        k_subsets(items, k, i + 1, cur, out);
        cur.pop_back();
    }
}

struct PcGraph {
    std::vector<std::string> names;  // sorted
    // und[a][b]: undirected adjacency; dir[a][b]: a -> b.
    std::vector<std::vector<bool>> und;
    std::vector<std::vector<bool>> dir;

    size_t n() const { return names.size(); }
    bool adjacent(size_t a, size_t b) const { return und[a][b] || dir[a][b] || dir[b][a]; }
};

// Meek rules R1-R4; repeated to a fixed point. Orientation never creates a
// new v-structure or a directed cycle.
bool meek_orient(PcGraph& g, size_t a, size_t b) {
    if (!g.und[a][b]) return false;
    g.und[a][b] = g.und[b][a] = false;
    g.dir[a][b] = true;
    return true;
}

void apply_meek_rules(PcGraph& g) {
    bool changed = true;
    while (changed) {
        changed = false;
        const size_t n = g.n();
        for (size_t a = 0; a < n; ++a) {
            for (size_t b = 0; b < n; ++b) {
                if (!g.und[a][b] || a == b) continue;

                // R1: c -> a, c not adjacent to b  =>  a -> b.
                for (size_t c = 0; c < n; ++c) {
                    if (g.dir[c][a] && !g.adjacent(c, b) && c != b) {
                        changed |= meek_orient(g, a, b);
                        break;
                    }
                }
                if (!g.und[a][b]) continue;

                // R2: directed path a -> ... -> b of length 2  =>  a -> b.
                for (size_t c = 0; c < n; ++c) {
                    if (g.dir[a][c] && g.dir[c][b]) {
                        changed |= meek_orient(g, a, b);
                        break;
                    }
                }
                if (!g.und[a][b]) continue;

                // R3: a - c -> b and a - d -> b with c, d nonadjacent => a -> b.
                bool applied = false;
                for (size_t c = 0; c < n && !applied; ++c) {
                    if (!(g.und[a][c] && g.dir[c][b])) continue;
                    for (size_t d = c + 1; d < n && !applied; ++d) {
                        if (!(g.und[a][d] && g.dir[d][b])) continue;
                        if (!g.adjacent(c, d)) {
                            changed |= meek_orient(g, a, b);
                            applied = true;
                        }
                    }
                }
                if (!g.und[a][b]) continue;

                // R4: a - d, d -> c, c -> b, a - c or a adjacent c => a -> b.
                for (size_t d = 0; d < n; ++d) {
                    if (!g.und[a][d]) continue;
                    for (size_t c = 0; c < n; ++c) {
                        if (g.dir[d][c] && g.dir[c][b] && g.adjacent(a, c)) {
                            changed |= meek_orient(g, a, b);
                            break;
                        }
                    }
                    if (!g.und[a][b]) break;
                }
            }
        }
    }
}

}  // namespace

bool CpdagResult::has_directed(const std::string& from, const std::string& to) const {
    return std::find(directed.begin(), directed.end(), std::make_pair(from, to)) != directed.end();
}

bool CpdagResult::has_undirected(const std::string& a, const std::string& b) const {
    const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    return std::find(skeleton.begin(), skeleton.end(), key) != skeleton.end();
}

std::string CpdagResult::to_dot() const {
    std::set<std::string> names;
    for (const auto& [a, b] : skeleton) {
        names.insert(a);
        names.insert(b);
    }
    for (const auto& [a, b] : directed) {
        names.insert(a);
        names.insert(b);
    }
    std::string out = "digraph {\n";
    for (const auto& n : names) out += "  " + n + ";\n";
    for (const auto& [a, b] : directed) out += "  " + a + " -> " + b + ";\n";
    for (const auto& [a, b] : skeleton) out += "  " + a + " -> " + b + " [dir=none];\n";
    out += "}\n";
    return out;
}

CpdagResult run_pc(const DataTable& data, double alpha) {
    if (data.column_count() < 2) throw std::invalid_argument("run_pc: need at least two columns");

    PcGraph g;
    g.names = data.names();
    std::sort(g.names.begin(), g.names.end());
    const size_t n = g.n();
    g.und.assign(n, std::vector<bool>(n, false));
    g.dir.assign(n, std::vector<bool>(n, false));
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            if (a != b) g.und[a][b] = true;
        }
    }

    std::map<std::pair<size_t, size_t>, std::set<std::string>> sepsets;

    // Level-wise skeleton pruning. The adjacency snapshot per level is the
    // stable-PC variant: removals within a level do not affect the
    // candidate conditioning sets of that level. Levels the sample cannot
    // support are not tested, so degenerate inputs yield a complete or
    // partial skeleton instead of an error.
    for (size_t level = 0; data.row_count() > level + 3; ++level) {
        bool any_testable = false;
        const auto und_snapshot = g.und;
        for (size_t a = 0; a < n; ++a) {
            for (size_t b = a + 1; b < n; ++b) {
                if (!g.und[a][b]) continue;
                std::vector<std::string> adj;
                for (size_t c = 0; c < n; ++c) {
                    if (c != b && und_snapshot[a][c]) adj.push_back(g.names[c]);
                }
                if (adj.size() < level) continue;
                any_testable = true;

                std::vector<std::vector<std::string>> cands;
                std::vector<std::string> cur;
                k_subsets(adj, level, 0, cur, cands);
                for (const auto& cond : cands) {
                    const CiResult ci = ci_test_partial_correlation(
                        data, g.names[a], g.names[b],
                        std::set<std::string>(cond.begin(), cond.end()), alpha);
                    if (ci.independent) {
                        g.und[a][b] = g.und[b][a] = false;
                        sepsets[{a, b}] = std::set<std::string>(cond.begin(), cond.end());
                        break;
                    }
                }
            }
        }
        if (!any_testable) break;
    }

    // V-structures: a - c - b with a, b nonadjacent and c not in sepset(a,b).
    for (size_t c = 0; c < n; ++c) {
        for (size_t a = 0; a < n; ++a) {
            if (!(g.und[a][c] || g.dir[a][c])) continue;
            for (size_t b = a + 1; b < n; ++b) {
                if (b == c || a == c) continue;
                if (!(g.und[b][c] || g.dir[b][c])) continue;
                if (g.adjacent(a, b)) continue;
                auto it = sepsets.find({std::min(a, b), std::max(a, b)});
                const bool c_in_sepset = it != sepsets.end() && it->second.count(g.names[c]) > 0;
                if (!c_in_sepset) {
                    if (g.und[a][c]) meek_orient(g, a, c);
                    if (g.und[b][c]) meek_orient(g, b, c);
                }
            }
        }
    }

    apply_meek_rules(g);

    CpdagResult out;
    out.alpha = alpha;
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            if (g.dir[a][b]) out.directed.push_back({g.names[a], g.names[b]});
            if (a < b && g.und[a][b]) out.skeleton.push_back({g.names[a], g.names[b]});
        }
    }
    for (const auto& [key, zs] : sepsets) {
        out.separation_sets[{g.names[key.first], g.names[key.second]}] = zs;
    }
    return out;
}

namespace {

// Fourth-moment dependence proxy for standardized, uncorrelated pairs.
// Vanishes for independent samples and for joint Gaussians after
// regressing out the linear part; picks up the cross-moments that the
// wrong causal direction leaves behind.
double moment_dependence(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    double sab = 0.0, sa2b2 = 0.0, sa3b = 0.0, sab3 = 0.0, sa2 = 0.0, sb2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double x = a[i];
        const double y = b[i];
        sab += x * y;
        sa2b2 += x * x * y * y;
        sa3b += x * x * x * y;
        sab3 += x * y * y * y;
        sa2 += x * x;
        sb2 += y * y;
    }
    const double inv = 1.0 / static_cast<double>(n);
    sab *= inv;
    sa2b2 *= inv;
    sa3b *= inv;
    sab3 *= inv;
    sa2 *= inv;
    sb2 *= inv;
    return std::abs(sa2b2 - sa2 * sb2 - 2.0 * sab * sab) + std::abs(sa3b - 3.0 * sab * sa2) +
           std::abs(sab3 - 3.0 * sab * sb2);
}

void regress_out(std::vector<double>& target, const std::vector<double>& regressor) {
    const double vr = variance(regressor);
    if (vr <= 0.0) return;
    const double beta = covariance(target, regressor) / vr;
    const double mt = mean(target);
    const double mr = mean(regressor);
    for (size_t i = 0; i < target.size(); ++i) {
        target[i] = target[i] - mt - beta * (regressor[i] - mr);
    }
}

}  // namespace

Dag run_lingam(const DataTable& data) {
    const size_t p = data.column_count();
    Dag g;
    std::vector<std::string> names = data.names();
    std::sort(names.begin(), names.end());
    for (const auto& n : names) g.add_node(n);
    if (p < 2) return g;
    if (data.row_count() < 8) throw std::runtime_error("run_lingam: too few rows to order variables");

    // Working copies, standardized.
    std::map<std::string, std::vector<double>> work;
    for (const auto& n : names) {
        std::vector<double> col = data.column(n);
        standardize(col);
        work[n] = std::move(col);
    }

    std::vector<std::string> remaining = names;
    std::vector<std::string> order;
    while (remaining.size() > 1) {
        std::string best;
        double best_score = std::numeric_limits<double>::infinity();
        for (const auto& cand : remaining) {
            double score = 0.0;
            for (const auto& other : remaining) {
                if (other == cand) continue;
                std::vector<double> resid = work[other];
                regress_out(resid, work[cand]);
                standardize(resid);
                score += moment_dependence(work[cand], resid);
            }
            if (score < best_score) {
                best_score = score;
                best = cand;
            }
        }
        order.push_back(best);
        remaining.erase(std::find(remaining.begin(), remaining.end(), best));
        for (const auto& other : remaining) {
            regress_out(work[other], work[best]);
            standardize(work[other]);
        }
    }
    order.push_back(remaining.front());

    // Weights by least squares of each variable on its order predecessors,
    // fit on the original columns so coefficients keep their data scale.
    // |weight| <= 0.01 is pruned.
    for (size_t k = 1; k < order.size(); ++k) {
        std::vector<std::span<const double>> design;
        std::vector<std::string> labels(order.begin(), order.begin() + k);
        for (const auto& pred : labels) design.push_back(data.column(pred));
        OlsFit fit;
        try {
            fit = ols(design, data.column(order[k]), labels);
        } catch (const RankDeficientError& e) {
            throw std::runtime_error("run_lingam: could not fit weights, singular design at " +
                                     e.column);
        }
        for (size_t j = 0; j < k; ++j) {
            const double w = fit.coef[j + 1];
            if (std::abs(w) > 0.01) g.add_edge(order[j], order[k], w);
        }
    }
    return g;
}

}  // namespace causal
