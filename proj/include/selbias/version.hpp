#pragma once

namespace selbias {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace selbias
