#pragma once

namespace freewill {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace freewill
