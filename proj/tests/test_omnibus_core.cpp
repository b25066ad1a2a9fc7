#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "omnibus/errors.hpp"
#include "omnibus/mc_calibration.hpp"
#include "omnibus/null_table.hpp"
#include "omnibus/rng.hpp"
#include "oracles.hpp"

using namespace omnibus;

TEST_CASE("cumulative scores") {
  const ScoreSums single = cumulative_scores(PValueVector({0.5}), Transform::neg_log());
  REQUIRE(single.s.size() == 1);
  CHECK(single.s[0] == doctest::Approx(0.6931471805599453).epsilon(1e-14));

  const ScoreSums ones = cumulative_scores(PValueVector({1.0, 1.0}), Transform::one_minus_p());
  CHECK(ones.s == std::vector<double>{0.0, 0.0});

  // sorting puts 0.01 first
  const ScoreSums pair = cumulative_scores(PValueVector({0.1, 0.01}), Transform::neg_log());
  CHECK(pair.s[0] == doctest::Approx(4.605170185988091).epsilon(1e-14));
  CHECK(pair.s[1] == doctest::Approx(6.907755278982137).epsilon(1e-14));

  // nonnegative transforms give nondecreasing sums
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unif(1e-10, 1.0);
  for (const auto& kind : {Transform::one_minus_p(), Transform::neg_log(), Transform::power()}) {
    std::vector<double> values(12);
    for (double& v : values) v = unif(gen);
    const ScoreSums sums = cumulative_scores(PValueVector(values), kind);
    CHECK(std::is_sorted(sums.s.begin(), sums.s.end()));
  }
}

TEST_CASE("null table at m=1 stores the rank lattice") {
  const std::int64_t B = 500;
  const NullTable table = build_null_table(1, Transform::neg_log(), B, 11);
  REQUIRE(table.tstar_null().size() == static_cast<std::size_t>(B));
  for (std::int64_t k = 0; k < B; ++k) {
    // continuous draws never tie, so the T* values are exactly the B ranks
    CHECK(table.tstar_null()[k] ==
          static_cast<double>(k + 1) / static_cast<double>(B + 1));
  }
}

TEST_CASE("first logp column is the sorted -log of per-replicate minima") {
  const std::int64_t B = 400;
  const std::uint64_t seed = 77;
  const int m = 5;
  const NullTable table = build_null_table(m, Transform::neg_log(), B, seed);
  std::vector<double> expected(B);
  std::vector<double> pvalues(m);
  for (std::int64_t b = 0; b < B; ++b) {
    null_replicate_pvalues(seed, b, pvalues);
    expected[b] = -std::log(*std::min_element(pvalues.begin(), pvalues.end()));
  }
  std::sort(expected.begin(), expected.end());
  const auto col = table.column(0);
  for (std::int64_t b = 0; b < B; ++b) {
    CHECK(col[b] == expected[b]);
  }
}

TEST_CASE("S_2 for the p transform follows the triangular law") {
  const std::int64_t B = 10000;
  const NullTable table = build_null_table(2, Transform::one_minus_p(), B, 2024);
  const auto col = table.column(1);
  double ks = 0.0;
  for (std::int64_t b = 0; b < B; ++b) {
    const double ecdf_hi = static_cast<double>(b + 1) / static_cast<double>(B);
    const double ecdf_lo = static_cast<double>(b) / static_cast<double>(B);
    const double cdf = oracles::triangular_cdf(col[b]);
    ks = std::max(ks, std::fabs(ecdf_hi - cdf));
    ks = std::max(ks, std::fabs(cdf - ecdf_lo));
  }
  CHECK(ks <= 3.0 / std::sqrt(static_cast<double>(B)));
}

TEST_CASE("omnibus statistic boundaries and rank identities") {
  const std::int64_t B = 2000;
  const NullTable table = build_null_table(3, Transform::one_minus_p(), B, 5);

  // all p = 1 gives zero sums, below every simulated value
  CHECK(omnibus_stat(PValueVector({1.0, 1.0, 1.0}), table) == 0.0);

  // m mismatch
  CHECK_THROWS_AS((void)omnibus_stat(PValueVector({0.5}), table), ConfigError);

  // m=1: T* equals the count of table p-values at least as small, over B+1
  const NullTable single = build_null_table(1, Transform::neg_log(), B, 6);
  std::vector<double> pvalues(1);
  for (double p : {0.013, 0.2, 0.5, 0.77, 0.999}) {
    const double tstar = omnibus_stat(PValueVector({p}), single);
    std::int64_t count = 0;
    for (std::int64_t b = 0; b < B; ++b) {
      null_replicate_pvalues(6, b, pvalues);
      count += pvalues[0] >= p ? 1 : 0;
    }
    CHECK(tstar == static_cast<double>(count) / static_cast<double>(B + 1));
  }
}

TEST_CASE("omnibus statistic matches a full-scan rank oracle") {
  const std::int64_t B = 1500;
  const int m = 7;
  const NullTable table = build_null_table(m, Transform::neg_log(), B, 31);
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> unif(1e-6, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> values(m);
    for (double& v : values) v = unif(gen);
    const PValueVector pv(values);
    const ScoreSums sums = cumulative_scores(pv, Transform::neg_log());
    double expected = 0.0;
    for (int i = 0; i < m; ++i) {
      const auto col = table.column(i);
      std::int64_t count = 0;
      for (double v : col) count += v <= sums.s[i] ? 1 : 0;
      expected = std::max(expected, static_cast<double>(count) / static_cast<double>(B + 1));
    }
    CHECK(omnibus_stat(pv, table) == expected);
  }
}

TEST_CASE("rank consistency on the table's own replicates") {
  const std::int64_t B = 800;
  const int m = 4;
  const std::uint64_t seed = 99;
  const NullTable table = build_null_table(m, Transform::neg_log(), B, seed);
  std::vector<double> pvalues(m), sums(m);
  for (std::int64_t b = 0; b < B; b += 37) {
    null_replicate_pvalues(seed, b, pvalues);
    std::sort(pvalues.begin(), pvalues.end());
    detail::cumulative_scores_sorted(pvalues, Transform::neg_log(), sums);
    for (int i = 0; i < m; ++i) {
      const auto col = table.column(i);
      std::int64_t rank = 0;
      for (double v : col) rank += v <= sums[i] ? 1 : 0;
      CHECK(table.gi(i, sums[i]) == static_cast<double>(rank) / static_cast<double>(B + 1));
      CHECK(rank >= 1);  // a replicate always counts itself
    }
  }
}

TEST_CASE("omnibus test p-value rank arithmetic") {
  const std::int64_t B = 2000;
  const NullTable single = build_null_table(1, Transform::neg_log(), B, 13);
  std::vector<double> pvalues(1);
  for (double p : {0.01, 0.3, 0.5, 0.9}) {
    const TestReport report = omnibus_test(PValueVector({p}), single);
    std::int64_t count = 0;
    for (std::int64_t b = 0; b < B; ++b) {
      null_replicate_pvalues(13, b, pvalues);
      count += pvalues[0] >= p ? 1 : 0;
    }
    // reported p equals (B + 2 - count') / (B + 1) with count' the rank count
    CHECK(report.p_value ==
          static_cast<double>(B + 1 - count + 1) / static_cast<double>(B + 1));
    // and sits within the rank granularity of the input
    CHECK(std::fabs(report.p_value - p) <= 3.0 / std::sqrt(static_cast<double>(B)) + 2.0 / (B + 1));
    CHECK(report.method == "omnibus-logp");
    REQUIRE(report.calibration.has_value());
    CHECK(report.calibration->replicates == B);
    CHECK(report.calibration->seed == 13);
    CHECK(report.calibration->rng_id == kRngId);
  }
}

TEST_CASE("observed T* above every null value gives the smallest p") {
  // fabricated table: tstar values all tiny, so any real observation beats them
  const std::int64_t B = 100;
  std::vector<double> columns(2 * B);
  for (std::int64_t b = 0; b < B; ++b) {
    columns[b] = static_cast<double>(b) / B;           // column 1 sorted
    columns[B + b] = 1.0 + static_cast<double>(b) / B; // column 2 sorted
  }
  std::vector<double> tstar(B, 1.0 / (B + 1.0));
  const NullTable table = NullTable::from_parts(2, Transform::one_minus_p(), B, 1, kRngId,
                                                std::move(columns), std::move(tstar));
  const TestReport report = omnibus_test(PValueVector({0.01, 0.02}), table);
  CHECK(report.statistic > 1.0 / (B + 1.0));
  CHECK(report.p_value == doctest::Approx(1.0 / (B + 1.0)).epsilon(1e-15));
}

TEST_CASE("null table build is deterministic across thread counts") {
  const NullTable one = build_null_table(6, Transform::neg_log(), 3000, 444, 1);
  const NullTable four = build_null_table(6, Transform::neg_log(), 3000, 444, 4);
  for (int i = 0; i < 6; ++i) {
    const auto a = one.column(i), b = four.column(i);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
  }
  REQUIRE(one.tstar_null().size() == four.tstar_null().size());
  for (std::size_t k = 0; k < one.tstar_null().size(); ++k) {
    CHECK(one.tstar_null()[k] == four.tstar_null()[k]);
  }
}

TEST_CASE("capacity and precondition errors") {
  CHECK_THROWS_AS((void)build_null_table(10, Transform::neg_log(), 10000, 1, 1, 1024),
                  CapacityError);
  CHECK_THROWS_AS((void)build_null_table(0, Transform::neg_log(), 1000, 1), ConfigError);
  CHECK_THROWS_AS((void)build_null_table(3, Transform::neg_log(), 99, 1), ConfigError);
  try {
    (void)build_null_table(10, Transform::neg_log(), 10000, 1, 1, 1024);
    CHECK(false);
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("replicates") != std::string::npos);
  }
}

TEST_CASE("shrinking a p-value never lowers T* or raises the omnibus p") {
  const NullTable table = build_null_table(10, Transform::neg_log(), 2000, 17);
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> values(10);
    for (double& v : values) v = std::max(unif01(gen), 1e-12);
    const PValueVector before(values);
    const std::size_t idx = gen() % values.size();
    values[idx] = std::max(values[idx] * unif01(gen), 1e-300);
    const PValueVector after(values);
    CHECK(omnibus_stat(after, table) >= omnibus_stat(before, table));
    CHECK(omnibus_test(after, table).p_value <= omnibus_test(before, table).p_value);
  }
}

TEST_CASE("T* is permutation invariant") {
  const NullTable table = build_null_table(8, Transform::inv_normal_z(), 1000, 23);
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unif(1e-8, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(8);
    for (double& v : values) v = unif(gen);
    std::vector<double> shuffled = values;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    CHECK(omnibus_stat(PValueVector(values), table) ==
          omnibus_stat(PValueVector(shuffled), table));
  }
}

TEST_CASE("omnibus p-values are uniform on fresh null data") {
  const std::int64_t B = 2000;
  const int nsim = 2000;
  const int m = 5;
  const NullTable table = build_null_table(m, Transform::neg_log(), B, 303);
  std::vector<double> reported(nsim);
  std::vector<double> values(m);
  for (int rep = 0; rep < nsim; ++rep) {
    Rng rng(404040, rep);  // distinct stream family from the table's
    for (double& v : values) v = rng.uniform_open01();
    reported[rep] = omnibus_test(PValueVector(values), table).p_value;
  }
  std::sort(reported.begin(), reported.end());
  double ks = 0.0;
  for (int k = 0; k < nsim; ++k) {
    ks = std::max(ks, std::fabs(static_cast<double>(k + 1) / nsim - reported[k]));
    ks = std::max(ks, std::fabs(reported[k] - static_cast<double>(k) / nsim));
  }
  CHECK(ks <= 3.0 / std::sqrt(static_cast<double>(nsim)));
}

TEST_CASE("mc_null_pvalue rank rule and the min-of-uniforms law") {
  const auto neg_min = [](std::span<const double> sorted) { return -sorted.front(); };
  // below all simulated -> 1; above all -> 1/(B+1)
  CHECK(mc_null_pvalue(neg_min, 5, 1000, 7, -2.0) == 1.0);
  CHECK(mc_null_pvalue(neg_min, 5, 1000, 7, 0.5) ==
        doctest::Approx(1.0 / 1001.0).epsilon(1e-15));

  // large-is-extreme on -min p reproduces P(min <= q) = 1 - (1-q)^5
  const std::int64_t B = 10000;
  for (double q : {0.01, 0.05, 0.2}) {
    const double p = mc_null_pvalue(neg_min, 5, B, 19, -q);
    const double expected = 1.0 - std::pow(1.0 - q, 5.0);
    CHECK(std::fabs(p - expected) <= 3.0 / std::sqrt(static_cast<double>(B)));
  }
}
