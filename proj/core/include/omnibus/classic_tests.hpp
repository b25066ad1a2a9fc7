#ifndef OMNIBUS_CLASSIC_TESTS_HPP
#define OMNIBUS_CLASSIC_TESTS_HPP

#include <span>

#include "omnibus/mc_calibration.hpp"
#include "omnibus/pvalues.hpp"

namespace omnibus {

// T = -2 sum log p_i, compared against chi^2 with 2m degrees of freedom.
TestReport fisher_test(const PValueVector& pvalues);

// Z = sum Phi^-1(1 - p_i) / sqrt(m), compared against the standard normal.
TestReport stouffer_test(const PValueVector& pvalues);

// Reports min(1, m * min p). With independent = true, the Sidak bound
// 1 - (1 - min p)^m instead; the report is then named "sidak".
TestReport bonferroni_test(const PValueVector& pvalues, bool independent = false);

// min over k of (m / k) * p_(k), capped at 1.
TestReport simes_test(const PValueVector& pvalues);

// HC*_m = max over i = 1..floor(alpha0 m) of
// sqrt(m) (i/m - p_(i)) / sqrt(p_(i) (1 - p_(i))). When alpha0 m < 1 the
// range degenerates to i = 1. Order statistics are clamped away from 0 and 1
// in the denominator.
double higher_criticism_stat(const PValueVector& pvalues, double alpha0 = 0.5);

// Exact one-sample Kolmogorov-Smirnov distance of the p-values from the
// uniform distribution: max_i max(i/m - p_(i), p_(i) - (i-1)/m).
double ks_uniform_stat(const PValueVector& pvalues);

// Monte-Carlo calibrated versions; the reference must have been built for
// the same m (ConfigError otherwise).
TestReport hc_test(const PValueVector& pvalues, double alpha0, const McNullDistribution& null);
TestReport ks_uniform_test(const PValueVector& pvalues, const McNullDistribution& null);

namespace detail {

double fisher_stat(std::span<const double> sorted_pvalues);
double stouffer_stat(std::span<const double> sorted_pvalues);
double simes_pvalue(std::span<const double> sorted_pvalues);
double bonferroni_pvalue(double min_p, int m, bool independent);
double hc_stat_sorted(std::span<const double> sorted_pvalues, double alpha0);
double ks_stat_sorted(std::span<const double> sorted_pvalues);

}  // namespace detail

}  // namespace omnibus

#endif
