#pragma once

namespace polyell {
inline constexpr const char* kToolName = "polyell";
inline constexpr const char* kToolVersion = "0.1.0";
}  // namespace polyell
