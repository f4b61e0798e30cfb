#pragma once

#include <stdexcept>
#include <string>

namespace latkern {

/// Malformed run configuration (missing key, bad value, unreadable file).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical guard tripped: Courant bound, refinement threshold, work cap.
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace latkern
