#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causal/dag.hpp"
#include "causal/table.hpp"

namespace causal {

struct CiResult {
    bool independent = false;
    double p_value = 0.0;
    double partial_corr = 0.0;
    // Set when the conditioning regression was singular; the pair is then
    // reported as dependent.
    bool degenerate = false;
};

// Fisher z-test of the partial correlation of x and y given cond.
// independent <=> p >= alpha. Requires rows > |cond| + 3.
CiResult ci_test_partial_correlation(const DataTable& data, const std::string& x,
                                     const std::string& y,
                                     const std::set<std::string>& cond, double alpha);

// Output of the PC algorithm: a CPDAG given as the still-undirected
// skeleton plus the edges the v-structure/Meek phases managed to orient.
struct CpdagResult {
    std::vector<std::pair<std::string, std::string>> skeleton;  // undirected, name-sorted pairs
    std::vector<std::pair<std::string, std::string>> directed;
    std::map<std::pair<std::string, std::string>, std::set<std::string>> separation_sets;
    double alpha = 0.0;

    bool has_directed(const std::string& from, const std::string& to) const;
    bool has_undirected(const std::string& a, const std::string& b) const;
    // Display form; undirected edges are emitted as `a -> b [dir=none]`.
    std::string to_dot() const;
};

// PC with the order-stable adjacency update and Meek orientation rules.
// Column iteration is by sorted name, so the result is invariant under
// column permutation. CI tests are evaluated sequentially; the stable
// adjacency snapshot makes the outcome equal to any order of evaluation
// within a level.
CpdagResult run_pc(const DataTable& data, double alpha = 0.05);

// Direct-style LiNGAM: iteratively pick the variable most independent of
// the other variables' residuals (fourth-moment dependence proxy), regress
// it out, then estimate edge weights by least squares in the discovered
// order. Columns are standardized first; edges with |weight| <= 0.01 are
// pruned. Returns a weighted DAG over the column names.
Dag run_lingam(const DataTable& data);

}  // namespace causal
