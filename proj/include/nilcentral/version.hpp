#pragma once

namespace nilcentral {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "nilcentral";

} // namespace nilcentral
