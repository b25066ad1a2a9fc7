#ifndef OMNIBUS_NULL_TABLE_HPP
#define OMNIBUS_NULL_TABLE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "omnibus/pvalues.hpp"
#include "omnibus/transforms.hpp"

namespace omnibus {

// Running sums of transformed sorted p-values: s[i] holds the sum of the
// transformed i+1 smallest p-values.
struct ScoreSums {
  std::vector<double> s;
};

ScoreSums cumulative_scores(const PValueVector& pvalues, const Transform& transform);

inline constexpr std::uint64_t kDefaultTableBudgetBytes = 4ULL << 30;

// Monte-Carlo calibration of the omnibus test for one (m, transform):
// per-index sorted null partial sums (the rank estimate of each G_i) plus the
// sorted null distribution of the statistic T* = max_i G_i(S_i), both taken
// from the same B replicates. Immutable after construction and safe to share
// across threads.
class NullTable {
 public:
  int m() const noexcept { return m_; }
  const Transform& transform() const noexcept { return transform_; }
  std::int64_t replicates() const noexcept { return replicates_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& rng_id() const noexcept { return rng_id_; }

  // Null samples of S_{i+1}, ascending.
  std::span<const double> column(int i) const noexcept {
    return {columns_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(replicates_),
            static_cast<std::size_t>(replicates_)};
  }

  // Null samples of T*, ascending; all values in (0, 1].
  const std::vector<double>& tstar_null() const noexcept { return tstar_null_; }

  // Empirical G_i(s) = #{replicates with column value <= s} / (B + 1);
  // max-rank tie rule. Values lie on {0, 1/(B+1), ..., B/(B+1)}.
  double gi(int i, double s) const noexcept;

  // Reassembles a table from stored parts, re-checking every invariant
  // (column order, T* order and range). Throws PersistenceError.
  static NullTable from_parts(int m, Transform transform, std::int64_t replicates,
                              std::uint64_t seed, std::string rng_id,
                              std::vector<double> columns, std::vector<double> tstar_null);

 private:
  NullTable() = default;

  int m_ = 0;
  Transform transform_;
  std::int64_t replicates_ = 0;
  std::uint64_t seed_ = 0;
  std::string rng_id_;
  std::vector<double> columns_;  // column-major, m columns of length B
  std::vector<double> tstar_null_;

  friend NullTable build_null_table(int, Transform, std::int64_t, std::uint64_t, int,
                                    std::uint64_t);
};

// Simulates B replicates of m iid uniform p-values, records the sorted null
// partial sums per index, and converts each replicate's sums into its T*
// through within-column max ranks. Bit-for-bit reproducible from
// (m, transform, B, seed) regardless of thread count. Throws CapacityError
// when the table would exceed `memory_budget_bytes`.
NullTable build_null_table(int m, Transform transform, std::int64_t replicates,
                           std::uint64_t seed, int threads = 0,
                           std::uint64_t memory_budget_bytes = kDefaultTableBudgetBytes);

// T* = max_i G_i(S_i) for the observed vector, evaluated against the table.
// Throws ConfigError when dimensions do not match.
double omnibus_stat(const PValueVector& pvalues, const NullTable& table);

// Full report: statistic T* and its add-one Monte-Carlo p-value
// (1 + #{null T* >= observed}) / (B + 1), with calibration metadata.
TestReport omnibus_test(const PValueVector& pvalues, const NullTable& table);

namespace detail {

void cumulative_scores_sorted(std::span<const double> sorted_pvalues, const Transform& transform,
                              std::span<double> out);
double omnibus_stat_sorted(std::span<const double> sorted_pvalues, const NullTable& table,
                           std::span<double> scratch);

}  // namespace detail

}  // namespace omnibus

#endif
