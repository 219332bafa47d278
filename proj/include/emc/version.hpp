#pragma once

namespace emc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace emc
