#ifndef OMNIBUS_PVALUES_HPP
#define OMNIBUS_PVALUES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace omnibus {

// Validated vector of p-values, each in (0, 1], length >= 1. The universal
// input to every global test. Construction throws ValidationError otherwise.
class PValueVector {
 public:
  explicit PValueVector(std::vector<double> values);

  int m() const noexcept { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const noexcept { return values_; }

  // Ascending copy.
  std::vector<double> sorted() const;

 private:
  std::vector<double> values_;
};

// Monte-Carlo provenance attached to calibrated reports.
struct CalibrationInfo {
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  std::string rng_id;
};

struct TestReport {
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  int m = 0;
  // Present iff the method is Monte-Carlo calibrated (omnibus, hc, ks).
  std::optional<CalibrationInfo> calibration;
};

}  // namespace omnibus

#endif
