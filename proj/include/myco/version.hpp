#pragma once

namespace myco {

inline constexpr const char* kToolName = "mycosim";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace myco
