#include "omnibus/pvalues.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "omnibus/errors.hpp"

namespace omnibus {

PValueVector::PValueVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw ValidationError("p-value vector must contain at least one value");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double p = values_[i];
    if (!(p > 0.0 && p <= 1.0)) {  // also rejects NaN
      throw ValidationError("p-value at index " + std::to_string(i) + " is " +
                            std::to_string(p) + "; must lie in (0, 1]");
    }
  }
}

std::vector<double> PValueVector::sorted() const {
  std::vector<double> out = values_;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace omnibus
