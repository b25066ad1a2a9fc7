#ifndef OMNIBUS_STATS_MATH_HPP
#define OMNIBUS_STATS_MATH_HPP

namespace omnibus {

// Standard normal distribution function Phi(x). Absolute error below 1e-12,
// nondecreasing in x.
double std_normal_cdf(double x) noexcept;

// Inverse of Phi on (0, 1). Rational approximation refined with one Newton
// step against std_normal_cdf; relative error below 1e-9 down to p = 1e-300.
// Throws std::domain_error outside (0, 1).
double std_normal_quantile(double p);

// Upper tail P(chi^2_df > x) through the regularized upper incomplete gamma
// Q(df/2, x/2). Absolute error below 1e-10, nonincreasing in x. Throws
// std::domain_error for x < 0 or df < 1.
double chi_square_sf(double x, int df);

}  // namespace omnibus

#endif
