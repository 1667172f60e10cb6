#pragma once

namespace qglt {

inline constexpr const char* version = "0.1.0";

}  // namespace qglt
