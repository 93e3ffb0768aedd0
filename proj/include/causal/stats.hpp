#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace causal {

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // sample variance, n-1
double sd(std::span<const double> v);
double covariance(std::span<const double> a, std::span<const double> b);
double pearson(std::span<const double> a, std::span<const double> b);

// Standard normal CDF and two-sided tail 2*Phi(-|z|).
double norm_cdf(double z);
double two_sided_p(double z);

struct OlsFit {
    std::vector<double> coef;       // one per design column, intercept first
    std::vector<double> se;
    std::vector<double> residuals;
    double sigma2 = 0.0;            // RSS / (n - p)
    double r_squared = 0.0;
    size_t n = 0;
};

// Thrown when the design matrix is numerically rank deficient. `column`
// holds the offending design-column label.
struct RankDeficientError {
    std::string column;
    std::string message;
};

// Least squares of y on [1, cols...] via Householder QR. Relative rank
// tolerance 1e-10; deficiency throws RankDeficientError with the first
// dependent column named.
OlsFit ols(const std::vector<std::span<const double>>& cols,
           std::span<const double> y,
           const std::vector<std::string>& labels);

// Partial correlation of x and y given the conditioning columns, computed
// from regression residuals. Throws RankDeficientError when the
// conditioning set is singular.
double partial_correlation(std::span<const double> x,
                           std::span<const double> y,
                           const std::vector<std::span<const double>>& cond);

// In-place standardization to zero mean, unit (sample) variance. Constant
// columns are centered only.
void standardize(std::vector<double>& v);

}  // namespace causal
