#include "causal/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "causal/stats.hpp"

namespace causal {

namespace {

constexpr double kZ95 = 1.959963984540054;

Estimate from_coef(double ate, double se, Strategy s, size_t n) {
    Estimate out;
    out.ate = ate;
    out.se = se;
    out.ci_low = ate - kZ95 * se;
    out.ci_high = ate + kZ95 * se;
    out.p_value = se > 0.0 ? two_sided_p(ate / se) : (ate == 0.0 ? 1.0 : 0.0);
    out.strategy = s;
    out.n = n;
    return out;
}

struct BackdoorFit {
    OlsFit fit;
    std::vector<std::string> design_names;  // treatment first, then adjustment
};

BackdoorFit backdoor_fit(const DataTable& data, const Estimand& e) {
    if (e.strategy != Strategy::Backdoor) {
        throw std::invalid_argument("estimator expects a backdoor estimand");
    }
    BackdoorFit out;
    out.design_names.push_back(e.treatment);
    for (const auto& z : e.adjustment) out.design_names.push_back(z);

    std::vector<std::span<const double>> cols;
    for (const auto& name : out.design_names) cols.push_back(data.column(name));
    const auto& y = data.column(e.outcome);
    if (data.row_count() <= out.design_names.size() + 2) {
        throw std::invalid_argument("estimate_backdoor_linear: need n > |adjustment| + 2 rows");
    }
    try {
        out.fit = ols(cols, y, out.design_names);
    } catch (const RankDeficientError& err) {
        throw std::runtime_error("estimate_backdoor_linear: " + err.message);
    }
    return out;
}

}  // namespace

Estimate estimate_backdoor_linear(const DataTable& data, const Estimand& e) {
    const BackdoorFit bf = backdoor_fit(data, e);
    return from_coef(bf.fit.coef[1], bf.fit.se[1], Strategy::Backdoor, data.row_count());
}

Estimate estimate_iv_wald(const DataTable& data, const Estimand& e) {
    if (e.strategy != Strategy::Iv) throw std::invalid_argument("estimate_iv_wald: not an iv estimand");
    if (e.instruments.empty()) throw std::invalid_argument("estimate_iv_wald: estimand has no instrument");
    // Deterministic choice: the estimand's first instrument.
    const std::string& z = *e.instruments.begin();
    const auto& zi = data.column(z);
    const auto& ti = data.column(e.treatment);
    const auto& yi = data.column(e.outcome);
    const size_t n = data.row_count();
    if (n < 8) throw std::invalid_argument("estimate_iv_wald: too few rows");

    const double ctz = covariance(ti, zi);
    const double r = pearson(ti, zi);
    const double weak_tol = std::max(4.0 / std::sqrt(static_cast<double>(n)), 0.02);
    if (std::abs(r) < weak_tol) {
        throw std::runtime_error("estimate_iv_wald: weak instrument " + z + " (|corr(t,z)| = " +
                                 std::to_string(std::abs(r)) + " < " + std::to_string(weak_tol) + ")");
    }
    const double ate = covariance(yi, zi) / ctz;

    // Delta-method standard error from the moment condition
    // E[(y - ate*t - c) (z - mean z)] = 0.
    const double mz = mean(zi);
    const double mt = mean(ti);
    const double my = mean(yi);
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double u = (yi[i] - my) - ate * (ti[i] - mt);
        const double g = (zi[i] - mz) * u;
        s += g * g;
    }
    const double denom = ctz * static_cast<double>(n - 1);
    const double se = std::sqrt(s) / std::abs(denom);
    return from_coef(ate, se, Strategy::Iv, n);
}

Estimate estimate_frontdoor_two_stage(const DataTable& data, const Estimand& e) {
    if (e.strategy != Strategy::Frontdoor) {
        throw std::invalid_argument("estimate_frontdoor_two_stage: not a frontdoor estimand");
    }
    if (e.mediators.empty()) {
        throw std::invalid_argument("estimate_frontdoor_two_stage: estimand has no mediators");
    }
    const size_t n = data.row_count();

    // Stage 2 first: outcome on all mediators plus the treatment.
    std::vector<std::string> stage2_names(e.mediators.begin(), e.mediators.end());
    stage2_names.push_back(e.treatment);
    std::vector<std::span<const double>> stage2_cols;
    for (const auto& name : stage2_names) stage2_cols.push_back(data.column(name));
    OlsFit outcome_fit;
    try {
        outcome_fit = ols(stage2_cols, data.column(e.outcome), stage2_names);
    } catch (const RankDeficientError& err) {
        throw std::runtime_error("estimate_frontdoor_two_stage: " + err.message);
    }

    double ate = 0.0;
    double var = 0.0;
    size_t mi = 0;
    for (const auto& m : e.mediators) {
        std::vector<std::span<const double>> t_col{data.column(e.treatment)};
        std::vector<std::string> t_name{e.treatment};
        OlsFit med_fit;
        try {
            med_fit = ols(t_col, data.column(m), t_name);
        } catch (const RankDeficientError& err) {
            throw std::runtime_error("estimate_frontdoor_two_stage: " + err.message);
        }
        const double a = med_fit.coef[1];
        const double sa = med_fit.se[1];
        const double b = outcome_fit.coef[1 + mi];
        const double sb = outcome_fit.se[1 + mi];
        ate += a * b;
        var += a * a * sb * sb + b * b * sa * sa;
        ++mi;
    }
    return from_coef(ate, std::sqrt(var), Strategy::Frontdoor, n);
}

MediationEstimate estimate_mediation(const DataTable& data, const Estimand& e) {
    if (e.strategy != Strategy::Mediation) {
        throw std::invalid_argument("estimate_mediation: not a mediation estimand");
    }
    const size_t n = data.row_count();

    std::vector<std::string> full_names{e.treatment};
    for (const auto& m : e.mediators) full_names.push_back(m);
    std::vector<std::span<const double>> full_cols;
    for (const auto& name : full_names) full_cols.push_back(data.column(name));

    std::vector<std::span<const double>> t_col{data.column(e.treatment)};
    std::vector<std::string> t_name{e.treatment};

    OlsFit with_mediators;
    OlsFit total_fit;
    try {
        with_mediators = ols(full_cols, data.column(e.outcome), full_names);
        total_fit = ols(t_col, data.column(e.outcome), t_name);
    } catch (const RankDeficientError& err) {
        throw std::runtime_error("estimate_mediation: " + err.message);
    }

    MediationEstimate out;
    out.direct = from_coef(with_mediators.coef[1], with_mediators.se[1], Strategy::Mediation, n);
    out.total = from_coef(total_fit.coef[1], total_fit.se[1], Strategy::Mediation, n);
    const double indirect = total_fit.coef[1] - with_mediators.coef[1];
    const double se =
        std::sqrt(total_fit.se[1] * total_fit.se[1] + with_mediators.se[1] * with_mediators.se[1]);
    out.indirect = from_coef(indirect, se, Strategy::Mediation, n);
    return out;
}

Estimate estimate_effect(const DataTable& data, const Estimand& e) {
    switch (e.strategy) {
        case Strategy::Backdoor: return estimate_backdoor_linear(data, e);
        case Strategy::Iv: return estimate_iv_wald(data, e);
        case Strategy::Frontdoor: return estimate_frontdoor_two_stage(data, e);
        case Strategy::Mediation: return estimate_mediation(data, e).total;
    }
    throw std::logic_error("unreachable");
}

std::vector<double> do_sample(const DataTable& data, const Estimand& e, double x_value,
                              size_t n_draws, Rng& rng) {
    if (e.strategy != Strategy::Backdoor) {
        throw std::invalid_argument("do_sample: requires a backdoor estimand");
    }
    const BackdoorFit bf = backdoor_fit(data, e);
    const size_t n = data.row_count();

    std::vector<const std::vector<double>*> adj_cols;
    for (const auto& z : e.adjustment) adj_cols.push_back(&data.column(z));

    std::vector<double> out;
    out.reserve(n_draws);
    for (size_t d = 0; d < n_draws; ++d) {
        const size_t row = static_cast<size_t>(rng.below(n));
        double pred = bf.fit.coef[0] + bf.fit.coef[1] * x_value;
        for (size_t j = 0; j < adj_cols.size(); ++j) {
            pred += bf.fit.coef[2 + j] * (*adj_cols[j])[row];
        }
        const size_t rrow = static_cast<size_t>(rng.below(n));
        out.push_back(pred + bf.fit.residuals[rrow]);
    }
    return out;
}

}  // namespace causal
