#ifndef OMNIBUS_VERSION_HPP
#define OMNIBUS_VERSION_HPP

namespace omnibus {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace omnibus

#endif
