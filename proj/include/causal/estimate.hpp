#pragma once

#include <string>
#include <vector>

#include "causal/identify.hpp"
#include "causal/rng.hpp"
#include "causal/table.hpp"

namespace causal {

// Average treatment effect in outcome units per unit treatment change
// (control 0 -> treatment 1), with a 95% normal-approximation interval.
struct Estimate {
    double ate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_value = 1.0;
    double se = 0.0;
    Strategy strategy = Strategy::Backdoor;
    size_t n = 0;
};

// OLS of outcome on {treatment} + adjustment set; the ATE is the treatment
// coefficient. Rank-deficient designs throw with the offending column
// named.
Estimate estimate_backdoor_linear(const DataTable& data, const Estimand& e);

// Wald ratio cov(outcome, instrument) / cov(treatment, instrument) using
// the estimand's first instrument; delta-method standard error. A weak
// instrument (treatment-instrument correlation indistinguishable from
// zero) throws.
Estimate estimate_iv_wald(const DataTable& data, const Estimand& e);

// Two-stage frontdoor: per mediator, (treatment -> mediator coefficient) x
// (mediator -> outcome coefficient adjusting for the treatment), summed.
Estimate estimate_frontdoor_two_stage(const DataTable& data, const Estimand& e);

struct MediationEstimate {
    Estimate direct;
    Estimate indirect;
    Estimate total;
};

// Linear mediation decomposition: direct = treatment coefficient
// controlling for the mediators, total = un-mediated regression,
// indirect = total - direct.
MediationEstimate estimate_mediation(const DataTable& data, const Estimand& e);

// Dispatch on the estimand's strategy; mediation estimands report the
// total effect.
Estimate estimate_effect(const DataTable& data, const Estimand& e);

// Draws from P(outcome | do(treatment = x)): resample adjustment rows,
// predict from the backdoor fit, add an empirical residual. Deterministic
// given the generator state.
std::vector<double> do_sample(const DataTable& data, const Estimand& e, double x_value,
                              size_t n_draws, Rng& rng);

}  // namespace causal
