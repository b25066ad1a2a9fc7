#include "omnibus/classic_tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "omnibus/errors.hpp"
#include "omnibus/stats_math.hpp"
#include "omnibus/transforms.hpp"

namespace omnibus {

namespace detail {

// The combination statistics sum over the sorted values so that reports are
// bit-identical under permutation of the input (float addition is not
// associative).
double fisher_stat(std::span<const double> sorted_pvalues) {
  double sum = 0.0;
  for (double p : sorted_pvalues) {
    sum += std::log(std::max(p, kClampFloor));
  }
  return -2.0 * sum;
}

double stouffer_stat(std::span<const double> sorted_pvalues) {
  const Transform z = Transform::inv_normal_z();
  double sum = 0.0;
  for (double p : sorted_pvalues) {
    sum += transform_score(p, z);
  }
  return sum / std::sqrt(static_cast<double>(sorted_pvalues.size()));
}

double bonferroni_pvalue(double min_p, int m, bool independent) {
  if (independent) {
    return 1.0 - std::pow(1.0 - min_p, static_cast<double>(m));
  }
  return std::min(1.0, static_cast<double>(m) * min_p);
}

double simes_pvalue(std::span<const double> sorted_pvalues) {
  const double m = static_cast<double>(sorted_pvalues.size());
  double best = 1.0;
  for (std::size_t k = 0; k < sorted_pvalues.size(); ++k) {
    best = std::min(best, sorted_pvalues[k] * m / static_cast<double>(k + 1));
  }
  return std::min(best, 1.0);
}

double hc_stat_sorted(std::span<const double> sorted_pvalues, double alpha0) {
  const std::size_t m = sorted_pvalues.size();
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  // i runs to floor(alpha0 m); degenerate ranges fall back to i = 1.
  std::size_t last = static_cast<std::size_t>(std::floor(alpha0 * static_cast<double>(m)));
  last = std::clamp<std::size_t>(last, 1, m);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= last; ++i) {
    const double p = sorted_pvalues[i - 1];
    const double clamped = std::clamp(p, kClampFloor, 1.0 - 1e-16);
    const double term = sqrt_m * (static_cast<double>(i) / static_cast<double>(m) - p) /
                        std::sqrt(clamped * (1.0 - clamped));
    best = std::max(best, term);
  }
  return best;
}

double ks_stat_sorted(std::span<const double> sorted_pvalues) {
  const double m = static_cast<double>(sorted_pvalues.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sorted_pvalues.size(); ++i) {
    const double p = sorted_pvalues[i];
    dist = std::max(dist, (static_cast<double>(i) + 1.0) / m - p);
    dist = std::max(dist, p - static_cast<double>(i) / m);
  }
  return dist;
}

}  // namespace detail

namespace {

void require_matching_m(const PValueVector& pvalues, const McNullDistribution& null,
                        const char* method) {
  if (pvalues.m() != null.m) {
    throw ConfigError(std::string(method) + ": input has m=" + std::to_string(pvalues.m()) +
                      " but the calibration was built for m=" + std::to_string(null.m));
  }
}

}  // namespace

TestReport fisher_test(const PValueVector& pvalues) {
  TestReport report;
  report.method = "fisher";
  report.m = pvalues.m();
  report.statistic = detail::fisher_stat(pvalues.sorted());
  report.p_value = chi_square_sf(report.statistic, 2 * pvalues.m());
  return report;
}

TestReport stouffer_test(const PValueVector& pvalues) {
  TestReport report;
  report.method = "stouffer";
  report.m = pvalues.m();
  report.statistic = detail::stouffer_stat(pvalues.sorted());
  // Upper tail of the standard normal, evaluated by symmetry to keep
  // precision for large Z.
  report.p_value = std_normal_cdf(-report.statistic);
  return report;
}

TestReport bonferroni_test(const PValueVector& pvalues, bool independent) {
  TestReport report;
  report.method = independent ? "sidak" : "bonferroni";
  report.m = pvalues.m();
  report.statistic = *std::min_element(pvalues.values().begin(), pvalues.values().end());
  report.p_value = detail::bonferroni_pvalue(report.statistic, pvalues.m(), independent);
  return report;
}

TestReport simes_test(const PValueVector& pvalues) {
  TestReport report;
  report.method = "simes";
  report.m = pvalues.m();
  const std::vector<double> sorted = pvalues.sorted();
  report.p_value = detail::simes_pvalue(sorted);
  report.statistic = report.p_value;
  return report;
}

double higher_criticism_stat(const PValueVector& pvalues, double alpha0) {
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) {
    throw ConfigError("higher criticism: alpha0 must lie in (0, 1], got " +
                      std::to_string(alpha0));
  }
  const std::vector<double> sorted = pvalues.sorted();
  return detail::hc_stat_sorted(sorted, alpha0);
}

double ks_uniform_stat(const PValueVector& pvalues) {
  const std::vector<double> sorted = pvalues.sorted();
  return detail::ks_stat_sorted(sorted);
}

TestReport hc_test(const PValueVector& pvalues, double alpha0, const McNullDistribution& null) {
  require_matching_m(pvalues, null, "hc_test");
  TestReport report;
  report.method = "hc";
  report.m = pvalues.m();
  report.statistic = higher_criticism_stat(pvalues, alpha0);
  report.p_value = mc_rank_pvalue(null.sorted_stats, report.statistic);
  report.calibration = CalibrationInfo{null.replicates, null.seed, null.rng_id};
  return report;
}

TestReport ks_uniform_test(const PValueVector& pvalues, const McNullDistribution& null) {
  require_matching_m(pvalues, null, "ks_uniform_test");
  TestReport report;
  report.method = "ks";
  report.m = pvalues.m();
  report.statistic = ks_uniform_stat(pvalues);
  report.p_value = mc_rank_pvalue(null.sorted_stats, report.statistic);
  report.calibration = CalibrationInfo{null.replicates, null.seed, null.rng_id};
  return report;
}

}  // namespace omnibus
