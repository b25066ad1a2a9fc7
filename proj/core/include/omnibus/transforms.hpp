#ifndef OMNIBUS_TRANSFORMS_HPP
#define OMNIBUS_TRANSFORMS_HPP

#include <string_view>

namespace omnibus {

// The four decreasing score transforms h(p): small p-values map to large
// scores, with different relative weight on the smallest ones.
enum class TransformKind {
  OneMinusP,   // h(p) = 1 - p
  NegLog,      // h(p) = -log p
  InvNormalZ,  // h(p) = Phi^-1(1 - p)
  Power,       // h(p) = p^-alpha
};

struct Transform {
  TransformKind kind = TransformKind::NegLog;
  double alpha = 0.5;  // Power exponent; must be > 0, ignored by other kinds

  static Transform one_minus_p() { return {TransformKind::OneMinusP, 0.5}; }
  static Transform neg_log() { return {TransformKind::NegLog, 0.5}; }
  static Transform inv_normal_z() { return {TransformKind::InvNormalZ, 0.5}; }
  static Transform power(double alpha = 0.5);

  // Canonical names used in CLI flags and file metadata: "p", "logp", "z",
  // "power".
  std::string_view name() const noexcept;
  static Transform from_name(std::string_view name, double alpha = 0.5);

  bool operator==(const Transform& other) const noexcept;
};

// Inputs below this floor are clamped, not rejected: p = 0 has probability
// zero under the continuous model but discrete tests and underflow produce
// it, and clamping keeps every score finite and monotone.
inline constexpr double kClampFloor = 1e-300;

// h(p) for p in (0, 1] after the clamping policy. Strictly decreasing in p
// for each kind; finite for p at or above the clamp floor. Throws
// std::domain_error for p outside (0, 1].
double transform_score(double p, const Transform& transform);

}  // namespace omnibus

#endif
