#ifndef OMNIBUS_SCENARIO_HPP
#define OMNIBUS_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omnibus/mc_calibration.hpp"
#include "omnibus/methods.hpp"
#include "omnibus/null_table.hpp"
#include "omnibus/pvalues.hpp"
#include "omnibus/rng.hpp"

namespace omnibus {

// Data-generating families for the power studies. The z-test families draw
// one-sided one-sample z-test p-values p = 1 - Phi(Z) with Z ~ N(sqrt(n) d, 1)
// per hypothesis; they differ in how the per-hypothesis effect d is chosen.
// Binomial draws two-sample chi-square p-values from discrete counts.
enum class Family {
  ZTestEqual,       // alternatives d = gamma / sqrt(m1), nulls d = 0
  ZTestNegNull,     // alternatives as above, nulls d = -gamma / sqrt(m1)
  ZTestExp,         // alternatives d ~ Exp(rate scale * sqrt(m1)), nulls 0
  ZTestExpNegNull,  // alternatives as above, nulls d ~ -Exp(same rate)
  Binomial,         // two-sample B(n, p0) vs B(n, p0 or p1), chi-square p
};

std::string_view family_name(Family family) noexcept;
Family family_from_name(std::string_view name);

struct ScenarioSpec {
  Family family = Family::ZTestEqual;
  int m = 10;
  int m1 = 0;  // number of true alternatives (the first m1 hypotheses)
  int n = 100;
  double gamma = 0.3;
  double exp_rate_scale = 3.0;
  double p0 = 0.5;
  double p1 = 0.5;
  double alpha = 0.05;

  // Throws ConfigError on violated bounds (m1 > m, n < 1, probabilities
  // outside (0, 1), ...).
  void validate() const;
};

// One p-value vector drawn from the scenario, using the supplied substream.
// With m1 = 0 every z-test family degenerates to iid uniform p-values (the
// exact global null). Generated values are floored at the clamp floor so the
// vector is always valid even when the effect saturates the normal tail.
PValueVector gen_ztest_pvalues(const ScenarioSpec& spec, Rng& rng);
PValueVector gen_binomial_pvalues(const ScenarioSpec& spec, Rng& rng);

// 2x2 chi-square p-value for x0 of n0 vs x1 of n1 successes, one degree of
// freedom, optional continuity correction (the R default, on). Degenerate
// margins (both groups all successes or all failures) give p = 1.
double chi2_2x2(int x0, int n0, int x1, int n1, bool continuity = true);

struct PowerResult {
  ScenarioSpec scenario;
  std::string method;
  std::int64_t nsim = 0;
  std::int64_t rejections = 0;
  double power = 0.0;
  std::uint64_t seed = 0;
  std::string rng_id;
};

// Lazily built shared calibrations for one study: one omnibus table per
// (m, transform) and one scalar null per (m, statistic), all from B
// replicates of the same substream family. Thread-safe; tables are immutable
// once built. With auto_build = false a missing table raises ConfigError.
class NullTableCache {
 public:
  NullTableCache(std::int64_t replicates, std::uint64_t seed, int threads = 0,
                 bool auto_build = true);

  std::shared_ptr<const NullTable> omnibus_table(int m, const Transform& transform);
  std::shared_ptr<const McNullDistribution> hc_null(int m, double alpha0);
  std::shared_ptr<const McNullDistribution> ks_null(int m);

  // Registers an externally built table (for example loaded from disk).
  void put_omnibus(std::shared_ptr<const NullTable> table);

  std::int64_t replicates() const noexcept { return replicates_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::int64_t replicates_;
  std::uint64_t seed_;
  int threads_;
  bool auto_build_;
  std::mutex mutex_;
  std::map<std::pair<int, std::string>, std::shared_ptr<const NullTable>> omnibus_;
  std::map<std::pair<int, std::string>, std::shared_ptr<const McNullDistribution>> scalar_;
};

// Simulates nsim replicates of the scenario and applies every requested
// method at level spec.alpha; a method rejects when its p-value is <= alpha.
// Replicates use substreams (data seed, replicate), so the result is
// independent of the number of worker threads.
std::vector<PowerResult> estimate_power(const ScenarioSpec& spec,
                                        const std::vector<Method>& methods, std::int64_t nsim,
                                        std::uint64_t seed, NullTableCache& tables,
                                        const MethodSettings& settings = {}, int threads = 0);

// m1 values evaluated by the minimax study: 1..m for m <= 50, otherwise the
// subgrid {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000} intersected with [1, m]
// plus m itself.
std::vector<int> minimax_m1_grid(int m);

struct MinimaxEntry {
  Method method;
  double min_power = 1.0;
  int argmin_m1 = 0;
};

struct MinimaxStudy {
  std::vector<int> m1_grid;
  std::vector<PowerResult> cells;  // one per (m1, method)
  std::vector<MinimaxEntry> minima;
};

// Worst-case power over m1 at constant cumulative effect: ZTestEqual with
// per-alternative effect gamma / sqrt(m1) for each m1 in minimax_m1_grid(m).
MinimaxStudy minimax_power(int m, int n, double gamma, const std::vector<Method>& methods,
                           std::int64_t nsim, std::uint64_t seed, NullTableCache& tables,
                           const MethodSettings& settings = {}, int threads = 0);

namespace detail {

void gen_ztest_into(const ScenarioSpec& spec, Rng& rng, std::span<double> out);
void gen_binomial_into(const ScenarioSpec& spec, Rng& rng, std::span<double> out);

}  // namespace detail

}  // namespace omnibus

#endif
