#pragma once

namespace cavsig {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cavsig
