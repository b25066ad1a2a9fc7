#include "omnibus/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "omnibus/classic_tests.hpp"
#include "omnibus/errors.hpp"
#include "omnibus/parallel.hpp"
#include "omnibus/stats_math.hpp"

namespace omnibus {

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::ZTestEqual:
      return "ztest-equal";
    case Family::ZTestNegNull:
      return "ztest-negnull";
    case Family::ZTestExp:
      return "ztest-exp";
    case Family::ZTestExpNegNull:
      return "ztest-expnegnull";
    case Family::Binomial:
      return "binomial";
  }
  return "ztest-equal";
}

Family family_from_name(std::string_view name) {
  for (Family f : {Family::ZTestEqual, Family::ZTestNegNull, Family::ZTestExp,
                   Family::ZTestExpNegNull, Family::Binomial}) {
    if (family_name(f) == name) return f;
  }
  throw ConfigError("unknown family '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
  if (m < 1) throw ConfigError("scenario: m must be >= 1");
  if (m1 < 0 || m1 > m) throw ConfigError("scenario: m1 must lie in [0, m]");
  if (n < 1) throw ConfigError("scenario: n must be >= 1");
  if (!(gamma >= 0.0)) throw ConfigError("scenario: gamma must be >= 0");
  if (!(exp_rate_scale > 0.0)) throw ConfigError("scenario: exp_rate_scale must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("scenario: alpha must lie in (0, 1)");
  if (family == Family::Binomial) {
    if (!(p0 > 0.0 && p0 < 1.0) || !(p1 > 0.0 && p1 < 1.0)) {
      throw ConfigError("scenario: p0 and p1 must lie in (0, 1)");
    }
  }
}

namespace detail {

void gen_ztest_into(const ScenarioSpec& spec, Rng& rng, std::span<double> out) {
  const double root_n = std::sqrt(static_cast<double>(spec.n));
  // With m1 = 0 there is nothing to scale by, and every family collapses to
  // the exact global null with iid uniform p-values.
  const double root_m1 = spec.m1 > 0 ? std::sqrt(static_cast<double>(spec.m1)) : 1.0;
  const double base_effect = spec.m1 > 0 ? spec.gamma / root_m1 : 0.0;
  const double exp_rate = spec.exp_rate_scale * root_m1;

  for (int i = 0; i < spec.m; ++i) {
    const bool alternative = i < spec.m1;
    double effect = 0.0;
    switch (spec.family) {
      case Family::ZTestEqual:
        effect = alternative ? base_effect : 0.0;
        break;
      case Family::ZTestNegNull:
        effect = alternative ? base_effect : (spec.m1 > 0 ? -base_effect : 0.0);
        break;
      case Family::ZTestExp:
        effect = alternative ? rng.exponential(exp_rate) : 0.0;
        break;
      case Family::ZTestExpNegNull:
        effect = alternative ? rng.exponential(exp_rate)
                             : (spec.m1 > 0 ? -rng.exponential(exp_rate) : 0.0);
        break;
      case Family::Binomial:
        throw ConfigError("gen_ztest_pvalues: binomial family requested");
    }
    const double z = root_n * effect + rng.normal();
    // p = 1 - Phi(z), evaluated as Phi(-z); floored so saturated effects
    // still produce a valid vector.
    out[static_cast<std::size_t>(i)] = std::max(std_normal_cdf(-z), kClampFloor);
  }
}

void gen_binomial_into(const ScenarioSpec& spec, Rng& rng, std::span<double> out) {
  for (int i = 0; i < spec.m; ++i) {
    const bool alternative = i < spec.m1;
    const int x0 = rng.binomial(spec.n, spec.p0);
    const int x1 = rng.binomial(spec.n, alternative ? spec.p1 : spec.p0);
    out[static_cast<std::size_t>(i)] =
        std::max(chi2_2x2(x0, spec.n, x1, spec.n, true), kClampFloor);
  }
}

}  // namespace detail

PValueVector gen_ztest_pvalues(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.family == Family::Binomial) {
    throw ConfigError("gen_ztest_pvalues: binomial family requested");
  }
  std::vector<double> values(static_cast<std::size_t>(spec.m));
  detail::gen_ztest_into(spec, rng, values);
  return PValueVector(std::move(values));
}

PValueVector gen_binomial_pvalues(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.family != Family::Binomial) {
    throw ConfigError("gen_binomial_pvalues: family is not binomial");
  }
  std::vector<double> values(static_cast<std::size_t>(spec.m));
  detail::gen_binomial_into(spec, rng, values);
  return PValueVector(std::move(values));
}

double chi2_2x2(int x0, int n0, int x1, int n1, bool continuity) {
  if (n0 < 1 || n1 < 1) {
    throw std::domain_error("chi2_2x2: group sizes must be >= 1");
  }
  if (x0 < 0 || x0 > n0 || x1 < 0 || x1 > n1) {
    throw std::domain_error("chi2_2x2: counts must lie in [0, n]");
  }
  const double successes = static_cast<double>(x0 + x1);
  const double failures = static_cast<double>((n0 - x0) + (n1 - x1));
  // Both groups all failures or all successes: no table to test.
  if (successes == 0.0 || failures == 0.0) return 1.0;

  const double total = static_cast<double>(n0 + n1);
  const double e00 = static_cast<double>(n0) * successes / total;
  const double e01 = static_cast<double>(n0) * failures / total;
  const double e10 = static_cast<double>(n1) * successes / total;
  const double e11 = static_cast<double>(n1) * failures / total;
  // |observed - expected| is the same in all four cells of a 2x2 table.
  const double dev = std::fabs(static_cast<double>(x0) - e00);
  const double yates = continuity ? std::min(0.5, dev) : 0.0;
  const double adj = dev - yates;
  const double stat = adj * adj * (1.0 / e00 + 1.0 / e01 + 1.0 / e10 + 1.0 / e11);
  return chi_square_sf(stat, 1);
}

NullTableCache::NullTableCache(std::int64_t replicates, std::uint64_t seed, int threads,
                               bool auto_build)
    : replicates_(replicates), seed_(seed), threads_(threads), auto_build_(auto_build) {}

namespace {

std::string transform_key(const Transform& transform) {
  std::string key(transform.name());
  if (transform.kind == TransformKind::Power) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "@%.17g", transform.alpha);
    key += buf;
  }
  return key;
}

}  // namespace

std::shared_ptr<const NullTable> NullTableCache::omnibus_table(int m, const Transform& transform) {
  const std::pair<int, std::string> key{m, transform_key(transform)};
  std::lock_guard lock(mutex_);
  auto it = omnibus_.find(key);
  if (it != omnibus_.end()) return it->second;
  if (!auto_build_) {
    throw ConfigError("no null table for m=" + std::to_string(m) + ", transform=" + key.second +
                      "; build one first (cache is in explicit mode)");
  }
  auto table = std::make_shared<const NullTable>(build_null_table(
      m, transform, replicates_, derive_seed(seed_, "null-calibration"), threads_));
  omnibus_.emplace(key, table);
  return table;
}

std::shared_ptr<const McNullDistribution> NullTableCache::hc_null(int m, double alpha0) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "hc@%.17g", alpha0);
  const std::pair<int, std::string> key{m, buf};
  std::lock_guard lock(mutex_);
  auto it = scalar_.find(key);
  if (it != scalar_.end()) return it->second;
  if (!auto_build_) {
    throw ConfigError("no higher-criticism calibration for m=" + std::to_string(m));
  }
  auto null = std::make_shared<const McNullDistribution>(build_scalar_null(
      [alpha0](std::span<const double> sorted) { return detail::hc_stat_sorted(sorted, alpha0); },
      key.second, m, replicates_, derive_seed(seed_, "null-calibration"), threads_));
  scalar_.emplace(key, null);
  return null;
}

std::shared_ptr<const McNullDistribution> NullTableCache::ks_null(int m) {
  const std::pair<int, std::string> key{m, "ks"};
  std::lock_guard lock(mutex_);
  auto it = scalar_.find(key);
  if (it != scalar_.end()) return it->second;
  if (!auto_build_) {
    throw ConfigError("no Kolmogorov-Smirnov calibration for m=" + std::to_string(m));
  }
  auto null = std::make_shared<const McNullDistribution>(build_scalar_null(
      [](std::span<const double> sorted) { return detail::ks_stat_sorted(sorted); }, "ks", m,
      replicates_, derive_seed(seed_, "null-calibration"), threads_));
  scalar_.emplace(key, null);
  return null;
}

void NullTableCache::put_omnibus(std::shared_ptr<const NullTable> table) {
  const std::pair<int, std::string> key{table->m(), transform_key(table->transform())};
  std::lock_guard lock(mutex_);
  omnibus_[key] = std::move(table);
}

namespace {

struct MethodContext {
  Method method;
  std::shared_ptr<const NullTable> table;          // omnibus variants
  std::shared_ptr<const McNullDistribution> null;  // hc / ks
};

double evaluate_pvalue(const MethodContext& ctx, std::span<const double> sorted,
                       std::span<double> scratch, const MethodSettings& settings) {
  const int m = static_cast<int>(sorted.size());
  switch (ctx.method) {
    case Method::Fisher:
      return chi_square_sf(detail::fisher_stat(sorted), 2 * m);
    case Method::Stouffer:
      return std_normal_cdf(-detail::stouffer_stat(sorted));
    case Method::Bonferroni:
      return detail::bonferroni_pvalue(sorted.front(), m, false);
    case Method::Sidak:
      return detail::bonferroni_pvalue(sorted.front(), m, true);
    case Method::Simes:
      return detail::simes_pvalue(sorted);
    case Method::Hc:
      return mc_rank_pvalue(ctx.null->sorted_stats,
                            detail::hc_stat_sorted(sorted, settings.alpha0));
    case Method::Ks:
      return mc_rank_pvalue(ctx.null->sorted_stats, detail::ks_stat_sorted(sorted));
    case Method::OmnibusP:
    case Method::OmnibusLogP:
    case Method::OmnibusZ:
    case Method::OmnibusPower:
      return mc_rank_pvalue(ctx.table->tstar_null(),
                            detail::omnibus_stat_sorted(sorted, *ctx.table, scratch));
  }
  return 1.0;
}

}  // namespace

std::vector<PowerResult> estimate_power(const ScenarioSpec& spec,
                                        const std::vector<Method>& methods, std::int64_t nsim,
                                        std::uint64_t seed, NullTableCache& tables,
                                        const MethodSettings& settings, int threads) {
  spec.validate();
  if (methods.empty()) throw ConfigError("estimate_power: no methods requested");
  if (nsim < 1) throw ConfigError("estimate_power: nsim must be >= 1");

  // Resolve every calibration before entering the replicate loop.
  std::vector<MethodContext> contexts;
  contexts.reserve(methods.size());
  for (Method method : methods) {
    MethodContext ctx{method, nullptr, nullptr};
    if (auto transform = method_transform(method, settings.power_alpha)) {
      ctx.table = tables.omnibus_table(spec.m, *transform);
    } else if (method == Method::Hc) {
      ctx.null = tables.hc_null(spec.m, settings.alpha0);
    } else if (method == Method::Ks) {
      ctx.null = tables.ks_null(spec.m);
    }
    contexts.push_back(std::move(ctx));
  }

  const std::uint64_t data_seed = derive_seed(seed, "power-data");
  const int workers = resolve_threads(threads);
  std::vector<std::vector<std::int64_t>> counts(
      static_cast<std::size_t>(workers), std::vector<std::int64_t>(methods.size(), 0));

  parallel_blocks(nsim, workers, [&](std::int64_t begin, std::int64_t end, int w) {
    const std::size_t m = static_cast<std::size_t>(spec.m);
    std::vector<double> raw(m), sorted(m), scratch(m);
    std::vector<std::int64_t>& local = counts[static_cast<std::size_t>(w)];
    for (std::int64_t rep = begin; rep < end; ++rep) {
      Rng rng(data_seed, static_cast<std::uint64_t>(rep));
      if (spec.family == Family::Binomial) {
        detail::gen_binomial_into(spec, rng, raw);
      } else {
        detail::gen_ztest_into(spec, rng, raw);
      }
      std::copy(raw.begin(), raw.end(), sorted.begin());
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t j = 0; j < contexts.size(); ++j) {
        if (evaluate_pvalue(contexts[j], sorted, scratch, settings) <= spec.alpha) {
          ++local[j];
        }
      }
    }
  });

  std::vector<PowerResult> results;
  results.reserve(methods.size());
  for (std::size_t j = 0; j < methods.size(); ++j) {
    std::int64_t rejections = 0;
    for (const auto& local : counts) rejections += local[j];
    PowerResult result;
    result.scenario = spec;
    result.method = std::string(method_name(methods[j]));
    result.nsim = nsim;
    result.rejections = rejections;
    result.power = static_cast<double>(rejections) / static_cast<double>(nsim);
    result.seed = seed;
    result.rng_id = kRngId;
    results.push_back(std::move(result));
  }
  return results;
}

std::vector<int> minimax_m1_grid(int m) {
  std::vector<int> grid;
  if (m <= 50) {
    for (int k = 1; k <= m; ++k) grid.push_back(k);
    return grid;
  }
  for (int k : {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}) {
    if (k <= m) grid.push_back(k);
  }
  if (grid.back() != m) grid.push_back(m);
  return grid;
}

MinimaxStudy minimax_power(int m, int n, double gamma, const std::vector<Method>& methods,
                           std::int64_t nsim, std::uint64_t seed, NullTableCache& tables,
                           const MethodSettings& settings, int threads) {
  MinimaxStudy study;
  study.m1_grid = minimax_m1_grid(m);
  study.minima.reserve(methods.size());
  for (Method method : methods) {
    study.minima.push_back({method, 2.0, 0});
  }

  for (int m1 : study.m1_grid) {
    ScenarioSpec spec;
    spec.family = Family::ZTestEqual;
    spec.m = m;
    spec.m1 = m1;
    spec.n = n;
    spec.gamma = gamma;
    const std::uint64_t cell_seed = derive_seed(seed, "minimax-m1=" + std::to_string(m1));
    std::vector<PowerResult> cell =
        estimate_power(spec, methods, nsim, cell_seed, tables, settings, threads);
    for (std::size_t j = 0; j < methods.size(); ++j) {
      if (cell[j].power < study.minima[j].min_power) {
        study.minima[j].min_power = cell[j].power;
        study.minima[j].argmin_m1 = m1;
      }
      study.cells.push_back(cell[j]);
    }
  }
  return study;
}

}  // namespace omnibus
