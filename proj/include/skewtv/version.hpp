#pragma once

namespace skewtv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace skewtv
