#pragma once

namespace bellviol {

inline constexpr const char* version = "0.1.0";

} // namespace bellviol
