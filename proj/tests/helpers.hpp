#pragma once

// Shared test harness: linear structural-model simulation plus the
// brute-force interventional oracle the estimator tests compare against.

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "causal/rng.hpp"
#include "causal/table.hpp"

namespace testutil {

enum class Noise { Normal, Uniform };

struct ScmEdge {
    std::string from;
    std::string to;
    double weight;
};

// Linear SCM: each variable is the weighted sum of its parents plus an
// independent noise draw. `vars` must be listed in a valid causal order.
struct Scm {
    std::vector<std::string> vars;
    std::vector<ScmEdge> edges;
    Noise noise = Noise::Normal;
    double noise_scale = 1.0;
};

inline double noise_draw(const Scm& scm, causal::Rng& rng) {
    if (scm.noise == Noise::Normal) return scm.noise_scale * rng.normal();
    return scm.noise_scale * rng.uniform(-1.0, 1.0);
}

inline causal::DataTable simulate(const Scm& scm, size_t n, causal::Rng& rng) {
    std::map<std::string, std::vector<double>> cols;
    for (const auto& v : scm.vars) cols[v].assign(n, 0.0);
    for (size_t r = 0; r < n; ++r) {
        for (const auto& v : scm.vars) {
            double val = noise_draw(scm, rng);
            for (const auto& e : scm.edges) {
                if (e.to == v) val += e.weight * cols[e.from][r];
            }
            cols[v][r] = val;
        }
    }
    causal::DataTable out;
    for (const auto& v : scm.vars) out.add_column(v, std::move(cols[v]));
    return out;
}

// E[outcome | do(treatment = value)] by forward simulation: the treatment
// is clamped, everything else follows its structural equation.
inline double interventional_mean(const Scm& scm, const std::string& treatment, double value,
                                  const std::string& outcome, size_t n, causal::Rng& rng) {
    double total = 0.0;
    std::map<std::string, double> row;
    for (size_t r = 0; r < n; ++r) {
        for (const auto& v : scm.vars) {
            if (v == treatment) {
                row[v] = value;
                continue;
            }
            double val = noise_draw(scm, rng);
            for (const auto& e : scm.edges) {
                if (e.to == v) val += e.weight * row[e.from];
            }
            row[v] = val;
        }
        total += row.at(outcome);
    }
    return total / static_cast<double>(n);
}

// Bundled fixture directory: env override first, then the build-time path.
inline std::string data_dir() {
    if (const char* env = std::getenv("CAUSAL_DATA_DIR")) return env;
#ifdef CAUSAL_DATA_DIR_DEFAULT
    return CAUSAL_DATA_DIR_DEFAULT;
#else
    return "data";
#endif
}

}  // namespace testutil
