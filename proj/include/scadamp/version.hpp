#pragma once

namespace scadamp {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "scadamp";

}  // namespace scadamp
