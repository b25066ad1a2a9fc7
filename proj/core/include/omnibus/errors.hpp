#ifndef OMNIBUS_ERRORS_HPP
#define OMNIBUS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace omnibus {

// Invalid user-supplied data (p-values out of range, malformed input files).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched or missing calibration objects, bad study configurations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested build would exceed the configured memory budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File layer failures. `kind()` lets callers and tests tell the cases apart.
class PersistenceError : public std::runtime_error {
 public:
  enum class Kind {
    Io,
    BadMagic,
    BadVersion,
    BadChecksum,
    Truncated,
    Unsorted,
    BadValue,
  };

  PersistenceError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace omnibus

#endif
