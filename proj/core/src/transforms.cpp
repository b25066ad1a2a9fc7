#include "omnibus/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "omnibus/errors.hpp"
#include "omnibus/stats_math.hpp"

namespace omnibus {

namespace {

// Largest double below 1; the z transform clamps p to [floor, 1 - 1e-16] so
// that h stays finite at p = 1 (the Stouffer z-scores use the same bounds).
constexpr double kZCeiling = 1.0 - 1e-16;

}  // namespace

Transform Transform::power(double alpha) {
  if (!(alpha > 0.0)) {
    throw ConfigError("power transform alpha must be > 0, got " + std::to_string(alpha));
  }
  return {TransformKind::Power, alpha};
}

std::string_view Transform::name() const noexcept {
  switch (kind) {
    case TransformKind::OneMinusP:
      return "p";
    case TransformKind::NegLog:
      return "logp";
    case TransformKind::InvNormalZ:
      return "z";
    case TransformKind::Power:
      return "power";
  }
  return "logp";
}

Transform Transform::from_name(std::string_view name, double alpha) {
  if (name == "p") return one_minus_p();
  if (name == "logp") return neg_log();
  if (name == "z") return inv_normal_z();
  if (name == "power") return power(alpha);
  throw ConfigError("unknown transform '" + std::string(name) +
                    "'; expected one of p, logp, z, power");
}

bool Transform::operator==(const Transform& other) const noexcept {
  if (kind != other.kind) return false;
  return kind != TransformKind::Power || alpha == other.alpha;
}

double transform_score(double p, const Transform& transform) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("transform_score: p must lie in (0, 1], got " + std::to_string(p));
  }
  switch (transform.kind) {
    case TransformKind::OneMinusP:
      return 1.0 - p;
    case TransformKind::NegLog:
      return -std::log(std::max(p, kClampFloor));
    case TransformKind::InvNormalZ:
      // Phi^-1(1 - p) = -Phi^-1(p); evaluating at p keeps the small-p tail
      // accurate instead of losing it to 1 - p rounding.
      return -std_normal_quantile(std::clamp(p, kClampFloor, kZCeiling));
    case TransformKind::Power: {
      // Keep p^-alpha below DBL_MAX for any alpha, not just the default 0.5.
      const double floor = std::max(kClampFloor, std::exp(-708.0 / transform.alpha));
      return std::pow(std::max(p, floor), -transform.alpha);
    }
  }
  return 0.0;
}

}  // namespace omnibus
