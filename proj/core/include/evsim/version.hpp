#pragma once

namespace evsim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace evsim
