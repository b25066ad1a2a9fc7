#ifndef OMNIBUS_MC_CALIBRATION_HPP
#define OMNIBUS_MC_CALIBRATION_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace omnibus {

// Sorted Monte-Carlo null distribution of a scalar statistic where larger
// values are more extreme. Shared calibration backend for the higher
// criticism and Kolmogorov-Smirnov tests.
struct McNullDistribution {
  int m = 0;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  std::string rng_id;
  std::string stat_id;
  std::vector<double> sorted_stats;  // ascending, length == replicates
};

// Statistic evaluator over one simulated null vector; receives the p-values
// sorted ascending and must be pure and deterministic.
using StatFn = std::function<double(std::span<const double> sorted_pvalues)>;

// Fills `out` with the p-values of null replicate `replicate` for `seed`:
// out.size() iid uniforms on (0, 1] from substream (seed, replicate). Every
// calibration built from the same (seed, m, B) sees the same replicates.
void null_replicate_pvalues(std::uint64_t seed, std::int64_t replicate, std::span<double> out);

McNullDistribution build_scalar_null(const StatFn& stat, std::string stat_id, int m,
                                     std::int64_t replicates, std::uint64_t seed,
                                     int threads = 0);

// Add-one rank p-value with ties counted as extreme:
// (1 + #{null >= observed}) / (B + 1).
double mc_rank_pvalue(std::span<const double> sorted_null, double observed);

// One-shot convenience: simulate, evaluate, rank.
double mc_null_pvalue(const StatFn& stat, int m, std::int64_t replicates, std::uint64_t seed,
                      double observed, int threads = 0);

}  // namespace omnibus

#endif
