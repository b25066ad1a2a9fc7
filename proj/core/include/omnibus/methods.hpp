#ifndef OMNIBUS_METHODS_HPP
#define OMNIBUS_METHODS_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "omnibus/transforms.hpp"

namespace omnibus {

enum class Method {
  Fisher,
  Stouffer,
  Bonferroni,
  Sidak,
  Simes,
  Hc,
  Ks,
  OmnibusP,
  OmnibusLogP,
  OmnibusZ,
  OmnibusPower,
};

// Canonical method names: "fisher", "stouffer", "bonferroni", "sidak",
// "simes", "hc", "ks", "omnibus-p", "omnibus-logp", "omnibus-z",
// "omnibus-power".
std::string_view method_name(Method method) noexcept;

// Throws ConfigError for unknown names.
Method method_from_name(std::string_view name);

const std::vector<Method>& all_methods();

// The omnibus transform behind a method, if it is an omnibus variant.
std::optional<Transform> method_transform(Method method, double power_alpha = 0.5);

bool method_is_mc_calibrated(Method method) noexcept;

// Per-run tuning shared by all methods.
struct MethodSettings {
  double alpha0 = 0.5;       // higher criticism index fraction
  double power_alpha = 0.5;  // exponent of the power transform
};

}  // namespace omnibus

#endif
