#pragma once

#include <cstdint>
#include <vector>

namespace qev::stats {

/// Upper regularized incomplete gamma Q(a, x) = Γ(a,x)/Γ(a).
double regularized_gamma_q(double a, double x);

/// Survival function of the chi-squared distribution with `dof` degrees of
/// freedom: P(X >= x).
double chi2_sf(double x, double dof);

/// Standard error of a binomial proportion estimate.
double binom_std_error(double p_hat, std::uint64_t n);

struct Chi2Result {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

/// Goodness-of-fit against explicit cell probabilities. Cells with expected
/// count below `min_expected` are pooled into a single bucket.
Chi2Result chi2_vs_expected(const std::vector<std::uint64_t>& counts,
                            const std::vector<double>& probs,
                            double min_expected = 5.0);

/// Goodness-of-fit against the uniform distribution over the cells.
Chi2Result chi2_uniform(const std::vector<std::uint64_t>& counts);

/// Two-sample homogeneity test over matching cells.
Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b,
                           double min_expected = 5.0);

} // namespace qev::stats
