#pragma once

namespace exagg {

inline constexpr const char* kToolName = "exagg";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace exagg
