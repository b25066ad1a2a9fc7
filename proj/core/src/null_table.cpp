#include "omnibus/null_table.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "omnibus/errors.hpp"
#include "omnibus/mc_calibration.hpp"
#include "omnibus/parallel.hpp"
#include "omnibus/rng.hpp"

namespace omnibus {

namespace detail {

void cumulative_scores_sorted(std::span<const double> sorted_pvalues, const Transform& transform,
                              std::span<double> out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted_pvalues.size(); ++i) {
    sum += transform_score(sorted_pvalues[i], transform);
    out[i] = sum;
  }
}

double omnibus_stat_sorted(std::span<const double> sorted_pvalues, const NullTable& table,
                           std::span<double> scratch) {
  cumulative_scores_sorted(sorted_pvalues, table.transform(), scratch);
  double best = 0.0;
  for (int i = 0; i < table.m(); ++i) {
    best = std::max(best, table.gi(i, scratch[static_cast<std::size_t>(i)]));
  }
  return best;
}

}  // namespace detail

ScoreSums cumulative_scores(const PValueVector& pvalues, const Transform& transform) {
  ScoreSums sums;
  sums.s.resize(static_cast<std::size_t>(pvalues.m()));
  const std::vector<double> sorted = pvalues.sorted();
  detail::cumulative_scores_sorted(sorted, transform, sums.s);
  return sums;
}

double NullTable::gi(int i, double s) const noexcept {
  const std::span<const double> col = column(i);
  const auto count = std::upper_bound(col.begin(), col.end(), s) - col.begin();
  return static_cast<double>(count) / static_cast<double>(replicates_ + 1);
}

NullTable NullTable::from_parts(int m, Transform transform, std::int64_t replicates,
                                std::uint64_t seed, std::string rng_id,
                                std::vector<double> columns, std::vector<double> tstar_null) {
  if (m < 1 || replicates < 1 ||
      columns.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(replicates) ||
      tstar_null.size() != static_cast<std::size_t>(replicates)) {
    throw PersistenceError(PersistenceError::Kind::BadValue, "null table: inconsistent sizes");
  }
  for (int i = 0; i < m; ++i) {
    const double* col = columns.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(replicates);
    if (!std::is_sorted(col, col + replicates)) {
      throw PersistenceError(PersistenceError::Kind::Unsorted,
                             "null table: column " + std::to_string(i + 1) + " is not sorted");
    }
  }
  if (!std::is_sorted(tstar_null.begin(), tstar_null.end())) {
    throw PersistenceError(PersistenceError::Kind::Unsorted,
                           "null table: T* null distribution is not sorted");
  }
  for (double t : tstar_null) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw PersistenceError(PersistenceError::Kind::BadValue,
                             "null table: T* null value outside (0, 1]");
    }
  }
  NullTable table;
  table.m_ = m;
  table.transform_ = transform;
  table.replicates_ = replicates;
  table.seed_ = seed;
  table.rng_id_ = std::move(rng_id);
  table.columns_ = std::move(columns);
  table.tstar_null_ = std::move(tstar_null);
  return table;
}

NullTable build_null_table(int m, Transform transform, std::int64_t replicates,
                           std::uint64_t seed, int threads,
                           std::uint64_t memory_budget_bytes) {
  if (m < 1) throw ConfigError("build_null_table: m must be >= 1");
  if (replicates < 100) throw ConfigError("build_null_table: need at least 100 replicates");

  const int workers = resolve_threads(threads);
  const std::uint64_t b = static_cast<std::uint64_t>(replicates);
  // Columns + T*, plus per-worker (value, replicate) pairs and rank maxima.
  const std::uint64_t needed =
      8 * b * (static_cast<std::uint64_t>(m) + 1) + 24 * b * static_cast<std::uint64_t>(workers);
  if (needed > memory_budget_bytes) {
    throw CapacityError("null table for m=" + std::to_string(m) + ", B=" +
                        std::to_string(replicates) + " needs about " + std::to_string(needed) +
                        " bytes, above the budget of " + std::to_string(memory_budget_bytes) +
                        "; lower --replicates, or raise the memory budget");
  }

  NullTable table;
  table.m_ = m;
  table.transform_ = transform;
  table.replicates_ = replicates;
  table.seed_ = seed;
  table.rng_id_ = kRngId;
  table.columns_.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(replicates));
  table.tstar_null_.resize(static_cast<std::size_t>(replicates));

  double* const columns = table.columns_.data();

  // Stage 1: per replicate, sorted uniforms -> transformed partial sums.
  // Replicate b writes columns[i*B + b]; blocks are disjoint in b.
  parallel_blocks(replicates, threads, [&](std::int64_t begin, std::int64_t end, int) {
    std::vector<double> pvalues(static_cast<std::size_t>(m));
    std::vector<double> sums(static_cast<std::size_t>(m));
    for (std::int64_t rep = begin; rep < end; ++rep) {
      null_replicate_pvalues(seed, rep, pvalues);
      std::sort(pvalues.begin(), pvalues.end());
      detail::cumulative_scores_sorted(pvalues, transform, sums);
      for (int i = 0; i < m; ++i) {
        columns[static_cast<std::size_t>(i) * b + static_cast<std::size_t>(rep)] =
            sums[static_cast<std::size_t>(i)];
      }
    }
  });

  // Stage 2: per column, max-rank each replicate (ties share the highest
  // rank), then store the column sorted. Workers own disjoint column blocks
  // and merge their rank maxima afterwards; elementwise max commutes, so the
  // merge order never matters.
  const int rank_workers = std::min<std::int64_t>(resolve_threads(threads), m);
  std::vector<std::vector<std::int64_t>> worker_max(
      static_cast<std::size_t>(rank_workers),
      std::vector<std::int64_t>(static_cast<std::size_t>(replicates), 0));

  parallel_blocks(m, rank_workers, [&](std::int64_t col_begin, std::int64_t col_end, int w) {
    std::vector<std::pair<double, std::int64_t>> order(static_cast<std::size_t>(replicates));
    std::vector<std::int64_t>& local_max = worker_max[static_cast<std::size_t>(w)];
    for (std::int64_t i = col_begin; i < col_end; ++i) {
      double* col = columns + static_cast<std::size_t>(i) * b;
      for (std::int64_t rep = 0; rep < replicates; ++rep) {
        order[static_cast<std::size_t>(rep)] = {col[rep], rep};
      }
      std::sort(order.begin(), order.end(),
                [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
      std::int64_t run_start = 0;
      while (run_start < replicates) {
        std::int64_t run_end = run_start + 1;
        while (run_end < replicates && order[static_cast<std::size_t>(run_end)].first ==
                                           order[static_cast<std::size_t>(run_start)].first) {
          ++run_end;
        }
        for (std::int64_t k = run_start; k < run_end; ++k) {
          const std::int64_t rep = order[static_cast<std::size_t>(k)].second;
          local_max[static_cast<std::size_t>(rep)] =
              std::max(local_max[static_cast<std::size_t>(rep)], run_end);
        }
        run_start = run_end;
      }
      for (std::int64_t rep = 0; rep < replicates; ++rep) {
        col[rep] = order[static_cast<std::size_t>(rep)].first;
      }
    }
  });

  for (std::int64_t rep = 0; rep < replicates; ++rep) {
    std::int64_t best = 0;
    for (const auto& local_max : worker_max) {
      best = std::max(best, local_max[static_cast<std::size_t>(rep)]);
    }
    table.tstar_null_[static_cast<std::size_t>(rep)] =
        static_cast<double>(best) / static_cast<double>(replicates + 1);
  }
  std::sort(table.tstar_null_.begin(), table.tstar_null_.end());
  return table;
}

double omnibus_stat(const PValueVector& pvalues, const NullTable& table) {
  if (pvalues.m() != table.m()) {
    throw ConfigError("omnibus_stat: input has m=" + std::to_string(pvalues.m()) +
                      " but the null table was built for m=" + std::to_string(table.m()));
  }
  const std::vector<double> sorted = pvalues.sorted();
  std::vector<double> scratch(sorted.size());
  return detail::omnibus_stat_sorted(sorted, table, scratch);
}

TestReport omnibus_test(const PValueVector& pvalues, const NullTable& table) {
  TestReport report;
  report.method = "omnibus-" + std::string(table.transform().name());
  report.m = pvalues.m();
  report.statistic = omnibus_stat(pvalues, table);
  report.p_value = mc_rank_pvalue(table.tstar_null(), report.statistic);
  report.calibration = CalibrationInfo{table.replicates(), table.seed(), table.rng_id()};
  return report;
}

}  // namespace omnibus
