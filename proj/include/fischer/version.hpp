#pragma once

namespace fischer {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fischer
