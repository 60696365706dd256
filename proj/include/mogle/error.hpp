#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace mogle {

// Incompatible extents fed to a tensor operation.
class ShapeError : public std::runtime_error {
  public:
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller broke an operation precondition (bad timestep, empty batch, ...).
class ContractError : public std::runtime_error {
  public:
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid run configuration.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// File missing, malformed, or corrupted.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
inline void format_parts(std::ostringstream&) {}
template <typename T, typename... Rest>
void format_parts(std::ostringstream& os, const T& v, const Rest&... rest) {
    os << v;
    format_parts(os, rest...);
}
}  // namespace detail

template <typename Err = ShapeError, typename... Parts>
[[noreturn]] void fail(const Parts&... parts) {
    std::ostringstream os;
    detail::format_parts(os, parts...);
    throw Err(os.str());
}

}  // namespace mogle
