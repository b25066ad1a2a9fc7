#include "omnibus/mc_calibration.hpp"

#include <algorithm>

#include "omnibus/errors.hpp"
#include "omnibus/parallel.hpp"
#include "omnibus/rng.hpp"

namespace omnibus {

void null_replicate_pvalues(std::uint64_t seed, std::int64_t replicate, std::span<double> out) {
  Rng rng(seed, static_cast<std::uint64_t>(replicate));
  for (double& p : out) {
    p = rng.uniform_open01();
  }
}

McNullDistribution build_scalar_null(const StatFn& stat, std::string stat_id, int m,
                                     std::int64_t replicates, std::uint64_t seed, int threads) {
  if (m < 1) throw ConfigError("build_scalar_null: m must be >= 1");
  if (replicates < 100) throw ConfigError("build_scalar_null: need at least 100 replicates");

  McNullDistribution null;
  null.m = m;
  null.replicates = replicates;
  null.seed = seed;
  null.rng_id = kRngId;
  null.stat_id = std::move(stat_id);
  null.sorted_stats.resize(static_cast<std::size_t>(replicates));

  parallel_blocks(replicates, threads, [&](std::int64_t begin, std::int64_t end, int) {
    std::vector<double> pvalues(static_cast<std::size_t>(m));
    for (std::int64_t b = begin; b < end; ++b) {
      null_replicate_pvalues(seed, b, pvalues);
      std::sort(pvalues.begin(), pvalues.end());
      null.sorted_stats[static_cast<std::size_t>(b)] = stat(pvalues);
    }
  });

  std::sort(null.sorted_stats.begin(), null.sorted_stats.end());
  return null;
}

double mc_rank_pvalue(std::span<const double> sorted_null, double observed) {
  const auto first_geq = std::lower_bound(sorted_null.begin(), sorted_null.end(), observed);
  const std::int64_t count = sorted_null.end() - first_geq;
  const std::int64_t b = static_cast<std::int64_t>(sorted_null.size());
  return static_cast<double>(1 + count) / static_cast<double>(b + 1);
}

double mc_null_pvalue(const StatFn& stat, int m, std::int64_t replicates, std::uint64_t seed,
                      double observed, int threads) {
  const McNullDistribution null = build_scalar_null(stat, "adhoc", m, replicates, seed, threads);
  return mc_rank_pvalue(null.sorted_stats, observed);
}

}  // namespace omnibus
