#pragma once

namespace kcohesion {

inline constexpr const char* version = "0.1.0";

}  // namespace kcohesion
