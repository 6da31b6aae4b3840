#pragma once

namespace sidkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sidkit
