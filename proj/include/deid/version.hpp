#pragma once

namespace deid {

inline constexpr const char* kToolName = "deid";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace deid
