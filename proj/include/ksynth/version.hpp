#pragma once

namespace ksynth {

inline constexpr const char* kToolName = "ksynth";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ksynth
