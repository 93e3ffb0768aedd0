#include "causal/refute.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "causal/stats.hpp"

namespace causal {

const char* refuter_name(RefuterMethod m) {
    switch (m) {
        case RefuterMethod::RandomCommonCause: return "random_common_cause";
        case RefuterMethod::PlaceboTreatment: return "placebo_treatment";
        case RefuterMethod::DataSubset: return "data_subset";
    }
    return "?";
}

namespace {

// Compatibility p-value of `reference` against the replicate effects: fit a
// normal to the replicates and take the two-sided tail of the reference.
// The scale is floored at 20% of the original estimate's magnitude so that
// immaterial wobble around a strong effect does not read as evidence
// against it; with the floor active, p stays near 1 for stable estimates
// and the refuter only reacts to deviations comparable to the effect
// itself.
double compatibility_p(double reference, const std::vector<double>& effects, double original) {
    const double m = mean(effects);
    const double s = sd(effects);
    const double scale = std::max({s, 0.2 * std::abs(original), 1e-300});
    return two_sided_p((reference - m) / scale);
}

RefutationResult finish(RefuterMethod method, const Estimate& est, double reference,
                        std::vector<double> effects) {
    RefutationResult out;
    out.method = method;
    out.original_effect = est.ate;
    out.replicates = effects.size();
    out.wide_variance = effects.size() < 20;
    out.new_effect = mean(effects);
    out.p_value = compatibility_p(reference, effects, est.ate);
    out.effects = std::move(effects);
    return out;
}

}  // namespace

RefutationResult refute_random_common_cause(const DataTable& data, const Estimand& e,
                                            const Estimate& est, size_t k, const Rng& rng) {
    if (k < 1) throw std::invalid_argument("refute_random_common_cause: k must be >= 1");
    if (e.strategy != Strategy::Backdoor) {
        throw std::invalid_argument(
            "refute_random_common_cause: only backdoor estimands take an added common cause");
    }
    const size_t n = data.row_count();
    std::vector<double> effects;
    effects.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        Rng r = rng.derive(i);
        std::vector<double> w(n);
        for (double& v : w) v = r.normal();

        DataTable with = data;
        std::string wname = "_random_common_cause";
        while (with.has_column(wname)) wname += "_";
        with.add_column(wname, std::move(w));

        Estimand e2 = e;
        e2.adjustment.insert(wname);
        effects.push_back(estimate_backdoor_linear(with, e2).ate);
    }
    return finish(RefuterMethod::RandomCommonCause, est, est.ate, std::move(effects));
}

RefutationResult refute_placebo(const DataTable& data, const Estimand& e, const Estimate& est,
                                size_t k, const Rng& rng) {
    if (k < 1) throw std::invalid_argument("refute_placebo: k must be >= 1");
    const size_t n = data.row_count();
    std::vector<double> effects;
    effects.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        Rng r = rng.derive(i);
        std::vector<double> placebo(n);
        for (double& v : placebo) v = r.normal();
        const DataTable with = data.with_column(e.treatment, std::move(placebo));
        effects.push_back(estimate_effect(with, e).ate);
    }
    return finish(RefuterMethod::PlaceboTreatment, est, 0.0, std::move(effects));
}

RefutationResult refute_data_subset(const DataTable& data, const Estimand& e, const Estimate& est,
                                    double fraction, size_t k, const Rng& rng) {
    if (k < 1) throw std::invalid_argument("refute_data_subset: k must be >= 1");
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("refute_data_subset: fraction must be in (0, 1]");
    }
    const size_t n = data.row_count();
    const size_t m = std::max<size_t>(1, static_cast<size_t>(std::floor(fraction * n)));
    if (m < data.column_count() + 3) {
        throw std::invalid_argument("refute_data_subset: subset too small for the estimator");
    }

    std::vector<double> effects;
    effects.reserve(k);
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < k; ++i) {
        Rng r = rng.derive(i);
        std::iota(idx.begin(), idx.end(), 0);
        // Partial Fisher-Yates: the first m entries are the subset.
        for (size_t j = 0; j < m; ++j) {
            const size_t pick = j + static_cast<size_t>(r.below(n - j));
            std::swap(idx[j], idx[pick]);
        }
        std::vector<size_t> rows(idx.begin(), idx.begin() + m);
        std::sort(rows.begin(), rows.end());
        effects.push_back(estimate_effect(data.select_rows(rows), e).ate);
    }
    return finish(RefuterMethod::DataSubset, est, est.ate, std::move(effects));
}

double aggregate_confidence(const std::vector<RefutationResult>& results) {
    if (results.empty()) throw std::invalid_argument("aggregate_confidence: no results");
    double s = 0.0;
    for (const auto& r : results) s += r.p_value;
    return s / static_cast<double>(results.size());
}

std::string format_refutation(const RefutationResult& r) {
    const char* title = "";
    switch (r.method) {
        case RefuterMethod::RandomCommonCause: title = "Refute: Add a random common cause"; break;
        case RefuterMethod::PlaceboTreatment: title = "Refute: Use a Placebo Treatment"; break;
        case RefuterMethod::DataSubset: title = "Refute: Use a subset of data"; break;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s\nEstimated effect:%.6g\nNew effect:%.6g\np value:%.2f\nreplicates:%zu%s\n",
                  title, r.original_effect, r.new_effect, r.p_value, r.replicates,
                  r.wide_variance ? "\nwarning: fewer than 20 replicates, wide variance" : "");
    return buf;
}

}  // namespace causal
