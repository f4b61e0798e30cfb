#pragma once

namespace latkern {

inline constexpr const char* kToolName = "latkern";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace latkern
