#include "causal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causal {

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double sd(std::span<const double> v) { return std::sqrt(variance(v)); }

double covariance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("covariance length mismatch");
    if (a.size() < 2) return 0.0;
    const double ma = mean(a);
    const double mb = mean(b);
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double va = variance(a);
    const double vb = variance(b);
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return covariance(a, b) / std::sqrt(va * vb);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double two_sided_p(double z) {
    double p = std::erfc(std::abs(z) / std::sqrt(2.0));
    return std::clamp(p, 0.0, 1.0);
}

namespace {
constexpr double kRankTol = 1e-10;
}

OlsFit ols(const std::vector<std::span<const double>>& cols,
           std::span<const double> y,
           const std::vector<std::string>& labels) {
    const size_t n = y.size();
    const size_t p = cols.size() + 1;  // leading intercept
    if (n < p + 1) throw std::invalid_argument("ols: need more rows than design columns");
    for (const auto& c : cols) {
        if (c.size() != n) throw std::invalid_argument("ols: column length mismatch");
    }

    // Column-major design matrix, intercept first.
    std::vector<std::vector<double>> a(p);
    a[0].assign(n, 1.0);
    for (size_t j = 1; j < p; ++j) a[j].assign(cols[j - 1].begin(), cols[j - 1].end());

    std::vector<double> qty(y.begin(), y.end());
    std::vector<double> colscale(p, 0.0);
    for (size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (double v : a[j]) s += v * v;
        colscale[j] = std::sqrt(s);
    }

    // Householder QR, applying reflections to y as we go.
    std::vector<double> rdiag(p, 0.0);
    for (size_t k = 0; k < p; ++k) {
        double nrm = 0.0;
        for (size_t i = k; i < n; ++i) nrm += a[k][i] * a[k][i];
        nrm = std::sqrt(nrm);

        const double scale = std::max(colscale[k], 1.0);
        if (nrm <= kRankTol * scale) {
            const std::string name = (k == 0) ? "(intercept)"
                                              : (k - 1 < labels.size() ? labels[k - 1]
                                                                       : "col" + std::to_string(k));
            throw RankDeficientError{name, "design matrix is rank deficient at column " + name};
        }

        if (a[k][k] < 0.0) nrm = -nrm;
        for (size_t i = k; i < n; ++i) a[k][i] /= nrm;
        a[k][k] += 1.0;

        for (size_t j = k + 1; j < p; ++j) {
            double s = 0.0;
            for (size_t i = k; i < n; ++i) s += a[k][i] * a[j][i];
            s = -s / a[k][k];
            for (size_t i = k; i < n; ++i) a[j][i] += s * a[k][i];
        }
        double s = 0.0;
        for (size_t i = k; i < n; ++i) s += a[k][i] * qty[i];
        s = -s / a[k][k];
        for (size_t i = k; i < n; ++i) qty[i] += s * a[k][i];

        rdiag[k] = -nrm;
    }

    // Back substitution on R (upper triangle stored above the reflectors).
    OlsFit fit;
    fit.n = n;
    fit.coef.assign(p, 0.0);
    for (size_t kk = p; kk-- > 0;) {
        double s = qty[kk];
        for (size_t j = kk + 1; j < p; ++j) s -= (kk < j ? a[j][kk] : 0.0) * fit.coef[j];
        fit.coef[kk] = s / rdiag[kk];
    }

    // Residuals from the original data.
    fit.residuals.assign(n, 0.0);
    double rss = 0.0;
    double tss = 0.0;
    const double ym = mean(y);
    for (size_t i = 0; i < n; ++i) {
        double pred = fit.coef[0];
        for (size_t j = 1; j < p; ++j) pred += fit.coef[j] * cols[j - 1][i];
        fit.residuals[i] = y[i] - pred;
        rss += fit.residuals[i] * fit.residuals[i];
        tss += (y[i] - ym) * (y[i] - ym);
    }
    fit.sigma2 = rss / static_cast<double>(n - p);
    fit.r_squared = (tss > 0.0) ? 1.0 - rss / tss : 0.0;

    // (X'X)^-1 = R^-1 R^-T; invert R, then accumulate row norms.
    std::vector<std::vector<double>> rinv(p, std::vector<double>(p, 0.0));
    for (size_t j = 0; j < p; ++j) {
        rinv[j][j] = 1.0 / rdiag[j];
        for (size_t i = j; i-- > 0;) {
            double s = 0.0;
            for (size_t k2 = i + 1; k2 <= j; ++k2) s += a[k2][i] * rinv[k2][j];
            rinv[i][j] = -s / rdiag[i];
        }
    }
    fit.se.assign(p, 0.0);
    for (size_t i = 0; i < p; ++i) {
        double s = 0.0;
        for (size_t j = i; j < p; ++j) s += rinv[i][j] * rinv[i][j];
        fit.se[i] = std::sqrt(fit.sigma2 * s);
    }
    return fit;
}

double partial_correlation(std::span<const double> x,
                           std::span<const double> y,
                           const std::vector<std::span<const double>>& cond) {
    if (cond.empty()) return pearson(x, y);
    std::vector<std::string> labels(cond.size());
    for (size_t i = 0; i < labels.size(); ++i) labels[i] = "z" + std::to_string(i);
    const OlsFit fx = ols(cond, x, labels);
    const OlsFit fy = ols(cond, y, labels);
    return pearson(fx.residuals, fy.residuals);
}

void standardize(std::vector<double>& v) {
    const double m = mean(v);
    const double s = sd(v);
    for (double& x : v) x = (s > 0.0) ? (x - m) / s : (x - m);
}

}  // namespace causal
