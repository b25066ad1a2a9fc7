#include "omnibus/methods.hpp"

#include <string>

#include "omnibus/errors.hpp"

namespace omnibus {

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::Fisher:
      return "fisher";
    case Method::Stouffer:
      return "stouffer";
    case Method::Bonferroni:
      return "bonferroni";
    case Method::Sidak:
      return "sidak";
    case Method::Simes:
      return "simes";
    case Method::Hc:
      return "hc";
    case Method::Ks:
      return "ks";
    case Method::OmnibusP:
      return "omnibus-p";
    case Method::OmnibusLogP:
      return "omnibus-logp";
    case Method::OmnibusZ:
      return "omnibus-z";
    case Method::OmnibusPower:
      return "omnibus-power";
  }
  return "fisher";
}

Method method_from_name(std::string_view name) {
  for (Method method : all_methods()) {
    if (method_name(method) == name) return method;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::Fisher, Method::Stouffer,  Method::Bonferroni,  Method::Sidak,
      Method::Simes,  Method::Hc,        Method::Ks,          Method::OmnibusP,
      Method::OmnibusLogP, Method::OmnibusZ, Method::OmnibusPower,
  };
  return methods;
}

std::optional<Transform> method_transform(Method method, double power_alpha) {
  switch (method) {
    case Method::OmnibusP:
      return Transform::one_minus_p();
    case Method::OmnibusLogP:
      return Transform::neg_log();
    case Method::OmnibusZ:
      return Transform::inv_normal_z();
    case Method::OmnibusPower:
      return Transform::power(power_alpha);
    default:
      return std::nullopt;
  }
}

bool method_is_mc_calibrated(Method method) noexcept {
  switch (method) {
    case Method::Hc:
    case Method::Ks:
    case Method::OmnibusP:
    case Method::OmnibusLogP:
    case Method::OmnibusZ:
    case Method::OmnibusPower:
      return true;
    default:
      return false;
  }
}

}  // namespace omnibus
