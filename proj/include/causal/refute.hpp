#pragma once

#include <string>
#include <vector>

#include "causal/estimate.hpp"
#include "causal/identify.hpp"
#include "causal/rng.hpp"
#include "causal/table.hpp"

namespace causal {

// Replicates derive independent per-index streams from the caller's
// generator, so results do not depend on evaluation order and refuters on
// disjoint data may run concurrently.

enum class RefuterMethod { RandomCommonCause, PlaceboTreatment, DataSubset };

const char* refuter_name(RefuterMethod m);

struct RefutationResult {
    RefuterMethod method = RefuterMethod::PlaceboTreatment;
    double original_effect = 0.0;
    double new_effect = 0.0;  // mean over replicates
    double p_value = 1.0;
    size_t replicates = 0;
    // Replicate counts below 20 cannot support the p-value's normal fit.
    bool wide_variance = false;
    std::vector<double> effects;  // per-replicate re-estimates
};

// Re-estimates with an independent standard-normal column appended to the
// adjustment set. Backdoor estimands only. The p-value asks whether the
// original estimate is compatible with the perturbed re-estimates.
RefutationResult refute_random_common_cause(const DataTable& data, const Estimand& e,
                                            const Estimate& est, size_t k, const Rng& rng);

// Replaces the treatment column with independent standard-normal noise per
// replicate and re-estimates; a trustworthy effect re-estimates to zero, so
// the p-value asks whether zero is compatible with the re-estimates.
RefutationResult refute_placebo(const DataTable& data, const Estimand& e, const Estimate& est,
                                size_t k, const Rng& rng);

// Re-estimates on row subsets of the given fraction (without replacement).
RefutationResult refute_data_subset(const DataTable& data, const Estimand& e, const Estimate& est,
                                    double fraction, size_t k, const Rng& rng);

// Mean p-value across refutations, the combined confidence in an analysis.
double aggregate_confidence(const std::vector<RefutationResult>& results);

// Plain-text block for one refutation.
std::string format_refutation(const RefutationResult& r);

}  // namespace causal
